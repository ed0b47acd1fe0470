"""Exact oracle: decide and minimize the makespan by complete search."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Union

from .core import Instance, MultiResourceInstance, Schedule, lower_bound_pairs, validate
from .search import BudgetExhausted, SearchStats, Task, assign_machines, find_starts

AnyInstance = Union[Instance, MultiResourceInstance]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible-at-bound"
BUDGET = "budget-exhausted"


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int | None = None
    time_budget: float | None = None  # seconds
    horizon: int | None = None


@dataclass
class ExactResult:
    status: str
    makespan: int | None = None
    schedule: Schedule | None = None
    lower: int | None = None
    upper: int | None = None
    nodes: int = 0


def _tasks(instance: AnyInstance) -> list[Task]:
    if isinstance(instance, Instance):
        return [Task(j.id, j.p, frozenset(((("class", j.class_id)),))) for j in instance.jobs]
    return [Task(j.id, j.p, frozenset(j.resources)) for j in instance.jobs]


def lower_bound(instance: AnyInstance) -> int:
    """Integer lower bound: load, heaviest resource, the pair bound and the longest job."""
    if instance.n == 0:
        return 0
    if isinstance(instance, Instance):
        res = max(instance.class_loads())
        sizes = [j.p for j in instance.jobs]
        pair = int(lower_bound_pairs(instance))
    else:
        res = max(instance.resource_loads().values(), default=0)
        sizes = sorted((j.p for j in instance.jobs), reverse=True)
        pair = sizes[instance.m - 1] + sizes[instance.m] if len(sizes) > instance.m else 0
    return max(ceil(Fraction(sum(sizes), instance.m)), res, pair, max(sizes))


def _to_schedule(instance: AnyInstance, starts: dict) -> Schedule:
    p = {t.id: t.p for t in _tasks(instance)}
    mach = assign_machines([(j, s, s + p[j]) for j, s in starts.items()], instance.m)
    return {j: (mach[j], Fraction(s)) for j, s in starts.items()}


def decide_makespan(instance: AnyInstance, K: int, limits: SearchLimits = SearchLimits(),
                    *, allowed: dict | None = None,
                    _deadline: float | None = None, _stats: SearchStats | None = None) -> ExactResult:
    """Is there a valid schedule with makespan <= K?  Start times range over {0..K}.

    ``allowed`` optionally restricts the start times of individual jobs.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    deadline = _deadline
    if deadline is None and limits.time_budget is not None:
        deadline = time.monotonic() + limits.time_budget
    stats = _stats if _stats is not None else SearchStats()
    tasks = _tasks(instance)
    before = stats.nodes
    try:
        starts = find_starts(tasks, instance.m, K, max_nodes=limits.max_nodes, deadline=deadline, stats=stats,
                             allowed=allowed)
    except BudgetExhausted:
        return ExactResult(BUDGET, nodes=stats.nodes - before)
    if starts is None:
        return ExactResult(INFEASIBLE, lower=K + 1, nodes=stats.nodes - before)
    sched = _to_schedule(instance, starts)
    rep = validate(instance, sched)
    assert rep.valid and rep.makespan <= K
    return ExactResult(OPTIMAL, int(rep.makespan), sched, upper=int(rep.makespan), nodes=stats.nodes - before)


def serial_starts(instance: AnyInstance) -> dict:
    """Start times of a simple list schedule (largest first, earliest feasible start)."""
    tasks = sorted(_tasks(instance), key=lambda t: (-t.p, repr(t.id)))
    horizon = sum(t.p for t in tasks)
    used = [0] * (horizon + 1)
    busy: dict = {}
    starts = {}
    for t in tasks:
        s = 0
        while True:
            win = range(s, s + t.p)
            if all(used[x] < instance.m for x in win) and all(
                    not (busy.get(r, 0) >> s) & ((1 << t.p) - 1) for r in t.resources):
                break
            s += 1
        for x in range(s, s + t.p):
            used[x] += 1
        for r in t.resources:
            busy[r] = busy.get(r, 0) | (((1 << t.p) - 1) << s)
        starts[t.id] = s
    return starts


def serial_upper(instance: AnyInstance) -> int:
    """Makespan of the list schedule of ``serial_starts``."""
    p = {t.id: t.p for t in _tasks(instance)}
    return max((s + p[j] for j, s in serial_starts(instance).items()), default=0)


def solve_exact(instance: AnyInstance, limits: SearchLimits = SearchLimits()) -> ExactResult:
    """Minimum makespan by binary search on K between the lower bound and a feasible upper bound."""
    if instance.n == 0:
        return ExactResult(OPTIMAL, 0, {}, 0, 0)
    deadline = None if limits.time_budget is None else time.monotonic() + limits.time_budget
    stats = SearchStats()
    lo = lower_bound(instance)
    fallback = _to_schedule(instance, serial_starts(instance))
    hi = listed = serial_upper(instance)
    if limits.horizon is not None:
        hi = min(hi, limits.horizon)
    best: ExactResult | None = None
    res = decide_makespan(instance, hi, limits, _deadline=deadline, _stats=stats)
    if res.status == BUDGET:
        # the list schedule is still a valid (non-optimal) answer
        return ExactResult(BUDGET, lower=lo, upper=listed, schedule=fallback, nodes=stats.nodes)
    if res.status == INFEASIBLE:
        # only possible when the caller's horizon is below the optimum
        return ExactResult(INFEASIBLE, lower=hi + 1, nodes=stats.nodes)
    best = res
    hi = res.makespan
    while lo < hi:
        mid = (lo + hi) // 2
        res = decide_makespan(instance, mid, limits, _deadline=deadline, _stats=stats)
        if res.status == BUDGET:
            return ExactResult(BUDGET, lower=lo, upper=hi, schedule=best.schedule, nodes=stats.nodes)
        if res.status == OPTIMAL:
            best = res
            hi = res.makespan
        else:
            lo = mid + 1
    return ExactResult(OPTIMAL, hi, best.schedule, lo, hi, stats.nodes)
