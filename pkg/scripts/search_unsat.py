"""Random search for unsatisfiable Monotone 3-SAT-(2,2) formulas.

Prints the first unsatisfiable formula found (as JSON) and, with --verify,
runs the oracle refutation of makespan 4 on its reduced instance.
"""
import argparse
import json
import random
import time

from msrs.exact import SearchLimits
from msrs.hardness import random_formula, verify_gap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vars", type=int, nargs="+", default=[3, 6, 9])
    ap.add_argument("--tries", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--verify", action="store_true")
    ap.add_argument("--time-budget", type=float, default=1800.0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for n in args.vars:
        t0 = time.time()
        found = None
        for i in range(args.tries):
            f = random_formula(n, rng)
            if f.find_witness() is None:
                found = f
                break
        dt = time.time() - t0
        if found is None:
            print(f"|X|={n}: no unsatisfiable formula in {args.tries} samples ({dt:.1f}s)")
            continue
        print(f"|X|={n}: unsatisfiable after {i + 1} samples")
        print(json.dumps({"vars": n, "clauses": [list(c) for c in found.clauses]}))
        if args.verify:
            r = verify_gap(found, SearchLimits(time_budget=args.time_budget))
            print(f"verify_gap: {r.verdict} (nodes {r.nodes})")


if __name__ == "__main__":
    main()
