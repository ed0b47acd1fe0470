"""Wall-time scaling of the two class-placement algorithms (evidence only, nothing asserted).

Doubles the number of jobs at a fixed job-to-machine ratio and prints the
time per instance; a roughly linear column means near-linear scaling.
"""
import argparse
import random
import time

from msrs.approx32 import schedule_32
from msrs.approx53 import schedule_53
from msrs.core import Instance


def make(n: int, rng: random.Random) -> Instance:
    rows, left = [], n
    while left:
        k = min(left, rng.randint(1, 6))
        rows.append([rng.randint(1, 100) for _ in range(k)])
        left -= k
    return Instance.from_sizes(max(2, len(rows) // 3), rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=int, default=250)
    ap.add_argument("--steps", type=int, default=6)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'n':>7} {'m':>5} {'a53 ms':>9} {'a32 ms':>9}")
    n = args.start
    for _ in range(args.steps):
        insts = [make(n, rng) for _ in range(args.reps)]
        row = []
        for alg in (schedule_53, schedule_32):
            t0 = time.perf_counter()
            for inst in insts:
                alg(inst)
            row.append((time.perf_counter() - t0) / len(insts) * 1000)
        print(f"{n:>7} {insts[0].m:>5} {row[0]:>9.2f} {row[1]:>9.2f}")
        n *= 2


if __name__ == "__main__":
    main()
