"""Benchmark the algorithms on generated batches, optionally against the oracle."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .approx32 import schedule_32
from .approx53 import schedule_53
from .core import Instance, select_T_32, select_T_53, validate
from .eptas import EptasLimits, SizeBudgetError, eptas_solve
from .exact import OPTIMAL, SearchLimits, solve_exact

GUARANTEE = {"a53": Fraction(5, 3), "a32": Fraction(3, 2)}
ALGORITHMS = ("a53", "a32", "eptas")


@dataclass
class BenchRow:
    index: int
    algorithm: str
    n: int
    m: int
    makespan: Fraction | None
    T: Fraction | None
    ratio_T: Fraction | None
    opt: int | None
    ratio_opt: Fraction | None
    wall: float
    note: str = ""


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def aggregate(self) -> dict[str, dict[str, float]]:
        out = {}
        for alg in sorted({r.algorithm for r in self.rows}):
            rs = [r for r in self.rows if r.algorithm == alg]
            rt = [r.ratio_T for r in rs if r.ratio_T is not None]
            ro = [r.ratio_opt for r in rs if r.ratio_opt is not None]
            out[alg] = {
                "rows": len(rs),
                "max_ratio_T": float(max(rt)) if rt else float("nan"),
                "mean_ratio_T": float(sum(rt) / len(rt)) if rt else float("nan"),
                "max_ratio_opt": float(max(ro)) if ro else float("nan"),
                "mean_ratio_opt": float(sum(ro) / len(ro)) if ro else float("nan"),
                "oracle_rows": len(ro),
                "wall": sum(r.wall for r in rs),
            }
        return out

    def table(self) -> str:
        head = f"{'#':>4} {'alg':<6} {'n':>3} {'m':>3} {'Cmax':>8} {'T':>8} {'Cmax/T':>7} {'OPT':>5} {'Cmax/OPT':>8} {'ms':>8}  note"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            def f(v, w, d=3):
                return f"{'-':>{w}}" if v is None else f"{float(v):>{w}.{d}f}"
            lines.append(f"{r.index:>4} {r.algorithm:<6} {r.n:>3} {r.m:>3} {f(r.makespan, 8, 2)} {f(r.T, 8, 2)} "
                         f"{f(r.ratio_T, 7)} {('-' if r.opt is None else r.opt):>5} {f(r.ratio_opt, 8)} "
                         f"{r.wall * 1000:>8.2f}  {r.note}")
        lines.append("")
        for alg, agg in self.aggregate().items():
            lines.append(f"{alg:<6} rows={agg['rows']} max Cmax/T={agg['max_ratio_T']:.4f} "
                         f"mean Cmax/T={agg['mean_ratio_T']:.4f} max Cmax/OPT={agg['max_ratio_opt']:.4f} "
                         f"(oracle on {agg['oracle_rows']} rows) wall={agg['wall']:.3f}s")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BenchConfig:
    algorithms: tuple[str, ...] = ALGORITHMS
    oracle_jobs: int = 9  # oracle only on instances with at most this many jobs
    oracle_time: float = 10.0  # seconds per instance
    epsilon: Fraction = Fraction(1, 2)
    eptas_limits: EptasLimits = EptasLimits(max_layers=256)


def bench_instance(args) -> list[BenchRow]:
    index, inst, cfg = args
    opt = None
    note = ""
    if inst.n <= cfg.oracle_jobs:
        res = solve_exact(inst, SearchLimits(time_budget=cfg.oracle_time))
        if res.status == OPTIMAL:
            opt = res.makespan
        else:
            note = "oracle-timeout"
    rows = []
    for alg in cfg.algorithms:
        t0 = time.perf_counter()
        row_note = note
        T = None
        try:
            if alg == "a53":
                sched, T = schedule_53(inst), select_T_53(inst)
                mach = inst.m
            elif alg == "a32":
                sched, T = schedule_32(inst), select_T_32(inst)
                mach = inst.m
            elif alg == "eptas":
                r = eptas_solve(inst, cfg.epsilon, "fixed-m", cfg.eptas_limits)
                sched, T, mach = r.schedule, r.T_star, r.machines
                row_note = (row_note + " " + (r.shortcut or "")).strip()
            else:
                raise ValueError(f"unknown algorithm {alg!r}")
        except SizeBudgetError as e:
            rows.append(BenchRow(index, alg, inst.n, inst.m, None, None, None, opt, None,
                                 time.perf_counter() - t0, f"size-budget: {e}"))
            continue
        wall = time.perf_counter() - t0
        rep = validate(Instance(mach, inst.classes), sched)
        if not rep.valid:
            row_note = (row_note + " INVALID").strip()
        cmax = rep.makespan
        ratio_T = None if not T else cmax / T
        ratio_opt = None if not opt else cmax / opt
        rows.append(BenchRow(index, alg, inst.n, inst.m, cmax, T, ratio_T, opt, ratio_opt, wall, row_note))
    return rows


def run_bench(instances: list[Instance], cfg: BenchConfig = BenchConfig(), workers: int | None = None) -> BenchReport:
    work = [(i, inst, cfg) for i, inst in enumerate(instances)]
    workers = workers or os.cpu_count() or 1
    if workers == 1:
        results = [bench_instance(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(bench_instance, work))
    report = BenchReport([r for rows in results for r in rows])
    return report
