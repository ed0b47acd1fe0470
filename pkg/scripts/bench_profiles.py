"""Benchmark every algorithm on each generator profile and print the aggregates.

Ratios are reported against the algorithm's own bound T and, on instances
small enough for the oracle, against OPT.
"""
import argparse
from fractions import Fraction

from msrs.bench import ALGORITHMS, BenchConfig, run_bench
from msrs.generate import PROFILES, GeneratorSpec, generate_batch


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100, help="instances per profile")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--profiles", nargs="+", choices=PROFILES, default=list(PROFILES))
    ap.add_argument("--algorithms", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    ap.add_argument("--epsilon", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--oracle-jobs", type=int, default=9)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--rows", action="store_true", help="print every row, not just the aggregates")
    args = ap.parse_args()
    cfg = BenchConfig(tuple(args.algorithms), args.oracle_jobs, 10.0, args.epsilon)
    for profile in args.profiles:
        insts = generate_batch(GeneratorSpec(seed=args.seed, profile=profile), args.count)
        report = run_bench(insts, cfg, args.workers)
        print(f"== {profile} ({len(insts)} instances)")
        if args.rows:
            print(report.table())
            continue
        for alg, agg in report.aggregate().items():
            print(f"  {alg:<6} max Cmax/T={agg['max_ratio_T']:.4f} mean={agg['mean_ratio_T']:.4f}  "
                  f"max Cmax/OPT={agg['max_ratio_opt']:.4f} over {agg['oracle_rows']} oracle rows  "
                  f"wall={agg['wall']:.2f}s")


if __name__ == "__main__":
    main()
