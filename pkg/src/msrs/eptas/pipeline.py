"""Binary search on the makespan guess T around the layered-IP pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from ..approx32 import schedule_32
from ..core import Instance, Job, Schedule, trivial_schedule, validate
from ..exact import lower_bound
from ..search import BudgetExhausted
from .ip import LayeredSolution, SizeBudgetError, count_configurations, solve_layer_ip
from .params import AUGMENTED, FIXED, MODES, EptasParams, choose_delta, normalize_epsilon
from .simplify import LayeredModel, MediumTrace, SmallTrace, remove_medium, remove_small_light, round_and_layer


@dataclass(frozen=True)
class EptasLimits:
    max_layers: int | None = None  # refuse models with more layers
    config_cap: int | None = None  # refuse models with more configurations
    ip_nodes: int | None = None  # node budget per IP call
    ip_time: float | None = None  # seconds per IP call


@dataclass
class GuessReport:
    T: Fraction
    accepted: bool
    reason: str  # "ip-feasible" | "ip-infeasible" | "idle-below-L" | "budget"
    delta: Fraction | None = None
    k: int | None = None
    medium_mass: int = 0
    whole_classes: int = 0
    L: int = 0
    n_layers: int = 0
    n_tasks: int = 0
    n_sizes: int = 0
    n_windows: int = 0
    n_configurations: int = 0


@dataclass
class EptasResult:
    schedule: Schedule
    makespan: Fraction
    machines: int  # machines the schedule may use (m plus any extra ones)
    extra_machines: int
    T_star: Fraction | None  # smallest accepted guess
    params: EptasParams | None
    epsilon: Fraction
    mode: str
    complete: bool = True  # every rejection was certified by a finished IP search
    shortcut: str | None = None
    guesses: list[GuessReport] = field(default_factory=list)

    def bound(self) -> Fraction | None:
        return None if self.params is None else self.params.bound()


# --- reinsertion ------------------------------------------------------------

def _greedy_append(groups: list[list[Job]], base: Fraction, width: Fraction, machines: range,
                   sched: Schedule) -> None:
    """Glue each group, sort decreasingly and fill machines in [base, base + width]."""
    groups = sorted((g for g in groups if g), key=lambda g: (-sum(j.p for j in g), g[0].id))
    it = iter(machines)
    mach = next(it)
    load = Fraction(0)
    for g in groups:
        size = sum(j.p for j in g)
        assert size <= width, "glued group larger than the reserved strip"
        if load + size > width:
            mach = next(it, None)
            assert mach is not None, "greedy strip ran out of machines"
            load = Fraction(0)
        t = base + load
        for j in g:
            sched[j.id] = (mach, t)
            t += j.p
        load += size


def reinsert_small(sol: LayeredSolution, model: LayeredModel, small: SmallTrace, medium: MediumTrace,
                   classes, m: int) -> tuple[Schedule, int]:
    """Turn a layered solution for the rounded instance into a schedule for the input.

    Returns the schedule and the number of extra machines it uses.
    """
    p = model.params
    eps, T, xi = p.epsilon, p.T, p.xi
    stretch = 1 + eps
    slot = stretch * xi  # = xi + mu T
    sched: Schedule = {}
    occupied: set[tuple[int, int]] = set()
    big_window: dict[int, tuple[int, Fraction, Fraction]] = {}  # class -> (machine, free from, window end)
    slots: dict[int, list[tuple[int, int]]] = {}
    for t in model.tasks:
        s = sol.start[t.key]
        mach = sol.machine[t.key]
        for l in range(s, s + t.layers):
            occupied.add((mach, l))
        if t.job is not None:
            start = stretch * s * xi
            sched[t.job.id] = (mach, start)
            if t.class_id not in big_window:
                big_window[t.class_id] = (mach, start + t.job.p, start + stretch * t.layers * xi)
        else:
            slots.setdefault(t.class_id, []).append((mach, s))

    # placeholder slots refilled with the class's own small jobs
    for c, jobs in model.placeholders.items():
        todo = sorted(jobs, key=lambda j: (-j.p, j.id))
        for mach, l in sorted(slots.get(c, []), key=lambda x: x[1]):
            t0 = stretch * l * xi
            load = Fraction(0)
            while todo and load < xi:
                j = todo.pop(0)
                sched[j.id] = (mach, t0 + load)
                load += j.p
            assert load <= slot
        assert not todo, f"class {c}: placeholders could not absorb its small jobs"

    # classes with tiny small mass: behind a big sibling, else whole class into a free slot
    free = [(mach, l) for l in range(model.n_layers) for mach in range(m) if (mach, l) not in occupied]
    free_iter = iter(free)
    cur, cur_load = None, Fraction(0)
    for c in sorted(small.tiny):
        jobs = small.tiny[c]
        mass = sum(j.p for j in jobs)
        if c in big_window:
            mach, t, end = big_window[c]
            assert t + mass <= end
            for j in jobs:
                sched[j.id] = (mach, t)
                t += j.p
            big_window[c] = (mach, t, end)
            continue
        if cur is None or cur_load >= xi:
            cur = next(free_iter, None)
            assert cur is not None, "ran out of free slots for tiny classes"
            cur_load = Fraction(0)
        mach, l = cur
        t = stretch * l * xi + cur_load
        for j in jobs:
            sched[j.id] = (mach, t)
            t += j.p
        cur_load += mass
        assert cur_load <= slot

    sizes = {j.id: j.p for c in classes for j in c}

    def end() -> Fraction:
        return max((t + sizes[j] for j, (_, t) in sched.items()), default=Fraction(0))

    # the strips start where the schedule actually ends, never later than the stretched horizon
    base1 = end()
    assert base1 <= stretch * model.n_layers * xi
    width = eps * T
    light = [small.light[c] for c in sorted(small.light)]
    if p.mode == FIXED:
        _greedy_append([[j for g in light for j in g]], base1, width, range(m), sched)
    else:
        _greedy_append(light, base1, width, range(m), sched)

    base2 = end()
    assert base2 <= base1 + width
    extra = 0
    if p.mode == FIXED:
        _greedy_append([list(medium.jobs)], base2, width, range(m), sched)
    else:
        by_class: dict[int, list[Job]] = {}
        for j in medium.jobs:
            by_class.setdefault(j.class_id, []).append(j)
        _greedy_append([by_class[c] for c in sorted(by_class)], base2, width, range(m), sched)
        for i, c in enumerate(medium.whole_classes):
            t = Fraction(0)
            for j in sorted(classes[c], key=lambda j: (-j.p, j.id)):
                sched[j.id] = (m + i, t)
                t += j.p
        extra = len(medium.whole_classes)
    return sched, extra


# --- one guess --------------------------------------------------------------

def try_guess(instance: Instance, T, epsilon: Fraction, mode: str, limits: EptasLimits = EptasLimits()):
    """Run the pipeline for one guess.  Returns (report, schedule or None, extra machines, params)."""
    T = Fraction(T)
    params = choose_delta(instance, epsilon, T, mode)
    rep = GuessReport(T, False, "", params.delta, params.k)
    if limits.max_layers is not None and params.n_layers > limits.max_layers:
        raise SizeBudgetError(f"{params.n_layers} layers exceed the cap {limits.max_layers}")
    I1, medium = remove_medium(instance.classes, params, m=instance.m if mode == AUGMENTED else None)
    rep.medium_mass = medium.mass() + sum(
        j.p for c in medium.whole_classes for j in instance.classes[c] if params.mu * T < j.p <= params.delta * T)
    rep.whole_classes = len(medium.whole_classes)
    I2, L, small = remove_small_light(I1, params)
    rep.L = L
    model = round_and_layer(I2, params)
    rep.n_layers = model.n_layers
    rep.n_tasks = len(model.tasks)
    rep.n_sizes = len(model.sizes)
    rep.n_windows = model.n_windows()
    rep.n_configurations = count_configurations(model.n_layers, model.sizes)
    if limits.config_cap is not None and rep.n_configurations > limits.config_cap:
        raise SizeBudgetError(f"|K| = {rep.n_configurations} exceeds the cap {limits.config_cap}")
    if (instance.m * model.n_layers - model.load_layers()) * params.xi < L:
        rep.reason = "idle-below-L"
        return rep, None, 0, params
    try:
        sol = solve_layer_ip(model, instance.m, max_nodes=limits.ip_nodes, time_budget=limits.ip_time)
    except BudgetExhausted:
        rep.reason = "budget"
        return rep, None, 0, params
    if sol is None:
        rep.reason = "ip-infeasible"
        return rep, None, 0, params
    sched, extra = reinsert_small(sol, model, small, medium, instance.classes, instance.m)
    rep.accepted = True
    rep.reason = "ip-feasible"
    return rep, sched, extra, params


# --- driver -----------------------------------------------------------------

def eptas_solve(instance: Instance, epsilon, mode: str = FIXED, limits: EptasLimits = EptasLimits()) -> EptasResult:
    """Smallest accepted integer guess T* and the schedule built for it.

    Every guess T >= OPT is accepted because the IP search is complete, so
    T* <= OPT unless some IP call ran out of budget (then ``complete`` is False
    and T* is only an upper-bound guess).  Makespan <= (1+eps)(1+2eps)T* + 2eps T*.
    """
    eps = normalize_epsilon(epsilon)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    m = instance.m
    if instance.n == 0:
        return EptasResult({}, Fraction(0), m, 0, None, None, eps, mode, shortcut="empty")
    if m == 1 or m >= len(instance.classes):
        sched = trivial_schedule(instance)
        rep = validate(instance, sched)
        # both shortcuts are optimal, so the accepted guess is the makespan itself
        return EptasResult(sched, rep.makespan, m, 0, rep.makespan, None, eps, mode,
                           shortcut="single-machine" if m == 1 else "class-per-machine")

    lo = lower_bound(instance)
    s32 = schedule_32(instance)
    hi = floor(validate(instance, s32).makespan)
    guesses: list[GuessReport] = []
    complete = True
    best = None
    # hi >= OPT, so the pipeline must accept it
    while best is None:
        rep, sched, extra, params = try_guess(instance, hi, eps, mode, limits)
        guesses.append(rep)
        if rep.accepted:
            best = (Fraction(hi), sched, extra, params)
        else:
            assert rep.reason == "budget", f"guess {hi} >= OPT was rejected ({rep.reason})"
            complete = False
            hi += 1
    hi_int = hi
    while lo < hi_int:
        mid = (lo + hi_int) // 2
        rep, sched, extra, params = try_guess(instance, mid, eps, mode, limits)
        guesses.append(rep)
        if rep.accepted:
            best = (Fraction(mid), sched, extra, params)
            hi_int = mid
        else:
            if rep.reason == "budget":
                complete = False
            lo = mid + 1
    T_star, sched, extra, params = best
    mach = m + extra
    full = Instance(mach, instance.classes)
    rep = validate(full, sched)
    assert rep.valid, rep.violations
    assert rep.makespan <= params.bound()
    if mode == AUGMENTED:
        assert extra <= floor(eps * m)
    else:
        assert extra == 0
    return EptasResult(sched, rep.makespan, mach, extra, T_star, params, eps, mode, complete, None, guesses)


def solve_guess(instance: Instance, T, epsilon, mode: str = FIXED, limits: EptasLimits = EptasLimits()):
    """Single-guess entry point: schedule within the bound or None if T was rejected."""
    rep, sched, extra, params = try_guess(instance, T, normalize_epsilon(epsilon), mode, limits)
    return rep, sched, extra, params


__all__ = ["EptasLimits", "EptasResult", "GuessReport", "eptas_solve", "reinsert_small", "solve_guess", "try_guess"]
