"""Command-line interface: msrs {solve,validate,generate,bench,gantt,reduce}."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .approx32 import ClaimError, schedule_32
from .approx53 import schedule_53
from .bench import ALGORITHMS, BenchConfig, run_bench
from .core import Instance, MultiResourceInstance, ScheduleError, restore_zero_jobs, select_T_32, select_T_53, validate
from .eptas import AUGMENTED, FIXED, EptasLimits, SizeBudgetError, eptas_solve
from .exact import BUDGET, OPTIMAL, SearchLimits, solve_exact
from .gantt import render_svg
from .generate import PROFILES, GeneratorSpec, generate, generate_batch
from .hardness import INCONCLUSIVE, reduce, verify_gap
from .io import InputError, dump_formula, dump_instance, dump_schedule, parse_formula, parse_instance, parse_schedule

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _err(msg: str) -> None:
    print(f"msrs: {msg}", file=sys.stderr)


def _rat(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


def cmd_solve(args) -> int:
    parsed = parse_instance(_read(args.instance), allow_zero=args.allow_zero)
    inst = parsed.instance
    summary: dict = {"algorithm": args.algorithm}
    machines = inst.m
    if isinstance(inst, MultiResourceInstance) and args.algorithm != "exact":
        raise InputError("multi-resource instances can only be solved with 'exact'")
    if args.algorithm == "a53":
        T = select_T_53(inst)
        sched = schedule_53(inst)
    elif args.algorithm == "a32":
        T = select_T_32(inst)
        trace = [] if args.trace else None
        sched = schedule_32(inst, check=args.trace, trace=trace)
        if trace is not None:
            for ev in trace:
                print(f"claim {ev}", file=sys.stderr)
            summary["claims_checked"] = len(trace)
    elif args.algorithm == "eptas":
        limits = EptasLimits(max_layers=args.max_layers, config_cap=args.config_cap,
                             ip_nodes=args.max_nodes, ip_time=args.time_budget)
        res = eptas_solve(inst, args.epsilon, args.mode, limits)
        sched, T, machines = res.schedule, res.T_star, res.machines
        summary.update({
            "epsilon": str(res.epsilon), "mode": res.mode, "T_star": None if T is None else str(T),
            "shortcut": res.shortcut, "extra_machines": res.extra_machines, "complete": res.complete,
            "bound": None if res.bound() is None else str(res.bound()),
        })
        if res.params is not None:
            summary["delta"] = str(res.params.delta)
            summary["delta_extended"] = res.params.extended
        summary["guesses"] = [
            {"T": str(g.T), "accepted": g.accepted, "reason": g.reason, "delta": str(g.delta),
             "medium_mass": g.medium_mass, "whole_classes": g.whole_classes, "L": g.L, "layers": g.n_layers,
             "tasks": g.n_tasks, "sizes": g.n_sizes, "windows": g.n_windows, "configurations": g.n_configurations}
            for g in res.guesses]
    else:
        res = solve_exact(inst, SearchLimits(max_nodes=args.max_nodes, time_budget=args.time_budget))
        summary.update({"status": res.status, "nodes": res.nodes, "lower": res.lower})
        if res.status != OPTIMAL:
            _err(f"oracle stopped: {res.status} (lower bound {res.lower})")
            print(json.dumps(summary), file=sys.stderr)
            return EXIT_BUDGET
        sched, T = res.schedule, Fraction(res.makespan)
    check = Instance(machines, inst.classes) if isinstance(inst, Instance) else inst
    rep = validate(check, sched)
    sched = restore_zero_jobs(sched, parsed.zero_ids)
    summary.update({"makespan": str(rep.makespan), "T": None if T is None else str(T),
                    "ratio_to_T": None if not T else f"{float(rep.makespan / T):.6f}", "valid": rep.valid})
    _write(args.output, dump_schedule(sched, summary=summary))
    print(" ".join(f"{k}={v}" for k, v in summary.items() if k != "guesses"), file=sys.stderr)
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_validate(args) -> int:
    parsed = parse_instance(_read(args.instance), allow_zero=args.allow_zero)
    sched = parse_schedule(_read(args.schedule))
    for jid in parsed.zero_ids:
        sched.pop(jid, None)
    inst = parsed.instance
    if args.machines is not None and isinstance(inst, Instance):
        inst = Instance(args.machines, inst.classes)
    rep = validate(inst, sched)
    if rep.valid:
        print(f"valid makespan={rep.makespan}")
        return EXIT_OK
    for v in rep.violations:
        print(f"violation {v.kind}: jobs {', '.join(map(str, v.jobs))}")
    print(f"invalid ({len(rep.violations)} violations)")
    return EXIT_INVALID


def cmd_generate(args) -> int:
    spec = GeneratorSpec(seed=args.seed, profile=args.profile, m_min=args.m_min, m_max=args.m_max,
                         classes_min=args.classes_min, classes_max=args.classes_max,
                         jobs_per_class_max=args.jobs_per_class, p_max=args.p_max, max_jobs=args.max_jobs)
    _write(args.output, dump_instance(generate(spec)))
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = GeneratorSpec(seed=args.seed, profile=args.profile, m_max=args.m_max, p_max=args.p_max,
                         max_jobs=args.max_jobs)
    insts = generate_batch(spec, args.count)
    cfg = BenchConfig(tuple(args.algorithms), args.oracle_jobs, args.oracle_time, args.epsilon)
    report = run_bench(insts, cfg, args.workers)
    _write(args.output, report.table())
    bad = [r for r in report.rows if "INVALID" in r.note]
    return EXIT_INVALID if bad else EXIT_OK


def cmd_gantt(args) -> int:
    inst = parse_instance(_read(args.instance), allow_zero=args.allow_zero).instance
    sched = parse_schedule(_read(args.schedule))
    machines = max([inst.m] + [m + 1 for m, _ in sched.values()]) if isinstance(inst, Instance) else None
    markers = {}
    if args.T is not None:
        markers["T"] = args.T
        for r in args.ratio or []:
            markers[f"{r} T"] = r * args.T
    try:
        svg = render_svg(inst, sched, markers=markers, machines=machines)
    except ValueError as e:
        _err(str(e))
        return EXIT_INVALID
    _write(args.output, svg)
    return EXIT_OK


def cmd_reduce(args) -> int:
    formula = parse_formula(_read(args.formula))
    inst, gm = reduce(formula)
    _write(args.output, dump_instance(inst))
    if args.gadgets:
        Path(args.gadgets).write_text(json.dumps(gm.jobs, indent=1) + "\n")
    print(f"m={inst.m} jobs={inst.n} resources={len(gm.resources)}", file=sys.stderr)
    if args.verify:
        r = verify_gap(formula, SearchLimits(time_budget=args.time_budget))
        print(f"verify_gap: {r.verdict}", file=sys.stderr)
        if r.verdict == INCONCLUSIVE:
            return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="msrs", description="Scheduling with shared resources: solvers and tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="schedule an instance")
    s.add_argument("algorithm", choices=["a53", "a32", "eptas", "exact"])
    s.add_argument("instance", help="instance JSON ('-' for stdin)")
    s.add_argument("-o", "--output", help="schedule JSON (default stdout)")
    s.add_argument("--allow-zero", action="store_true", help="drop zero-length jobs instead of rejecting them")
    s.add_argument("--trace", action="store_true", help="a32: check and print every step claim")
    s.add_argument("--epsilon", type=_rat, default=Fraction(1, 2))
    s.add_argument("--mode", choices=[FIXED, AUGMENTED], default=FIXED)
    s.add_argument("--config-cap", type=int, default=None, help="eptas: refuse models with more configurations")
    s.add_argument("--max-layers", type=int, default=None, help="eptas: refuse models with more layers")
    s.add_argument("--max-nodes", type=int, default=None, help="search node budget")
    s.add_argument("--time-budget", type=float, default=None, help="search time budget in seconds")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check a schedule")
    v.add_argument("instance")
    v.add_argument("schedule")
    v.add_argument("--allow-zero", action="store_true")
    v.add_argument("--machines", type=int, default=None, help="override m (augmented schedules)")
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("generate", help="generate a random instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=PROFILES, default="uniform")
    g.add_argument("--m-min", type=int, default=2)
    g.add_argument("--m-max", type=int, default=8)
    g.add_argument("--classes-min", type=int, default=1)
    g.add_argument("--classes-max", type=int, default=8)
    g.add_argument("--jobs-per-class", type=int, default=4)
    g.add_argument("--p-max", type=int, default=10)
    g.add_argument("--max-jobs", type=int, default=16)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="benchmark on a generated batch")
    b.add_argument("--count", type=int, default=50)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--profile", choices=PROFILES, default="uniform")
    b.add_argument("--m-max", type=int, default=8)
    b.add_argument("--p-max", type=int, default=10)
    b.add_argument("--max-jobs", type=int, default=16)
    b.add_argument("--algorithms", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    b.add_argument("--oracle-jobs", type=int, default=9)
    b.add_argument("--oracle-time", type=float, default=10.0)
    b.add_argument("--epsilon", type=_rat, default=Fraction(1, 2))
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    gt = sub.add_parser("gantt", help="render a schedule as SVG")
    gt.add_argument("instance")
    gt.add_argument("schedule")
    gt.add_argument("-o", "--output")
    gt.add_argument("--T", type=_rat, default=None, help="draw the bound T")
    gt.add_argument("--ratio", type=_rat, nargs="*", help="extra markers at ratio * T")
    gt.add_argument("--allow-zero", action="store_true")
    gt.set_defaults(func=cmd_gantt)

    r = sub.add_parser("reduce", help="build the scheduling instance of a formula")
    r.add_argument("formula", help='formula JSON {"vars": n, "clauses": [[1, 2, 3], ...]}')
    r.add_argument("-o", "--output")
    r.add_argument("--gadgets", help="write the gadget-name -> job-id map here")
    r.add_argument("--verify", action="store_true", help="run verify_gap")
    r.add_argument("--time-budget", type=float, default=None)
    r.set_defaults(func=cmd_reduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        _err(str(e))
        return EXIT_INPUT
    except ScheduleError as e:
        _err(str(e))
        return EXIT_INPUT
    except SizeBudgetError as e:
        _err(f"size budget exceeded: {e}")
        return EXIT_BUDGET
    except ClaimError as e:
        _err(f"step claim failed: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
