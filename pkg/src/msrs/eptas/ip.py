"""Feasibility of the configuration IP over a layered model.

A solution assigns every task a start layer (the y variables) such that
tasks of one class never share a layer and each window count is covered by
m machine configurations.  Windows on a machine are pairwise disjoint, so
coverability by m configurations is the same as "at most m windows cross
any layer" (interval graphs are perfect and empty configurations are
allowed).  The search itself is the shared exact
kernel; a solution is decoded into explicit x_K and y values and checked
against all four constraints.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass

from ..search import BudgetExhausted, Task, assign_machines, find_starts
from .simplify import LayeredModel


class SizeBudgetError(RuntimeError):
    """The layered model is larger than the configured guard allows."""


@dataclass
class LayeredSolution:
    start: dict  # task key -> start layer (0-based)
    machine: dict  # task key -> machine
    x: Counter  # configuration (frozenset of (layer, p) windows) -> multiplicity
    y: Counter  # (class, layer, p) -> count


def count_configurations(n_layers: int, sizes) -> int:
    """|K|: selections of pairwise disjoint windows (l, p), p in sizes, inside n_layers layers."""
    f = [0] * (n_layers + 2)
    f[n_layers] = 1
    for t in range(n_layers - 1, -1, -1):
        f[t] = f[t + 1] + sum(f[t + p] for p in sizes if 0 < p and t + p <= n_layers)
    return f[0]


def check_ip_solution(model: LayeredModel, m: int, sol: LayeredSolution) -> None:
    """Assert every IP constraint on a decoded solution."""
    L = model.n_layers
    # exactly m configurations, each made of disjoint windows
    assert sum(sol.x.values()) == m
    for conf in sol.x:
        occupied = set()
        for l, p in conf:
            layers = set(range(l, l + p))
            assert not occupied & layers and l + p <= L
            occupied |= layers
    # configurations cover exactly the chosen windows
    covered = Counter()
    for conf, mult in sol.x.items():
        for w in conf:
            covered[w] += mult
    chosen = Counter()
    for (c, l, p), v in sol.y.items():
        chosen[(l, p)] += v
    assert covered == chosen
    # every task of every class is placed
    per_class = Counter()
    for (c, l, p), v in sol.y.items():
        per_class[(c, p)] += v
    assert per_class == Counter(model.counts())
    # a class uses each layer at most once
    use = Counter()
    for (c, l, p), v in sol.y.items():
        for t in range(l, l + p):
            use[(c, t)] += v
    assert all(v <= 1 for v in use.values())


def solve_layer_ip(model: LayeredModel, m: int, *, config_cap: int | None = None,
                   max_nodes: int | None = None, time_budget: float | None = None) -> LayeredSolution | None:
    """A decoded IP solution, or None when the IP is infeasible.

    Raises SizeBudgetError when |K| exceeds ``config_cap`` and BudgetExhausted
    when the search budget runs out.
    """
    if config_cap is not None:
        n_conf = count_configurations(model.n_layers, model.sizes)
        if n_conf > config_cap:
            raise SizeBudgetError(f"|K| = {n_conf} exceeds the cap {config_cap}")
    deadline = None if time_budget is None else time.monotonic() + time_budget
    tasks = [Task(t.key, t.layers, frozenset((t.class_id,))) for t in model.tasks]
    starts = find_starts(tasks, m, model.n_layers, max_nodes=max_nodes, deadline=deadline)
    if starts is None:
        return None
    by_key = {t.key: t for t in model.tasks}
    mach = assign_machines([(k, s, s + by_key[k].layers) for k, s in starts.items()], m)
    confs = [set() for _ in range(m)]
    y = Counter()
    for k, s in starts.items():
        t = by_key[k]
        confs[mach[k]].add((s, t.layers))
        y[(t.class_id, s, t.layers)] += 1
    x = Counter(frozenset(c) for c in confs)
    sol = LayeredSolution(starts, mach, x, y)
    check_ip_solution(model, m, sol)
    return sol


__all__ = ["BudgetExhausted", "LayeredSolution", "SizeBudgetError", "check_ip_solution",
           "count_configurations", "solve_layer_ip"]
