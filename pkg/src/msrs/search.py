"""Exact feasibility search over integer start times.

The kernel decides whether tasks with integer lengths and resource sets can
be placed in the horizon [0, K) such that at most ``m`` tasks run at any time
and tasks sharing a resource never overlap.  Machine indices are assigned
afterwards by interval partitioning, which is always possible once the number
of concurrently running tasks never exceeds ``m``.

Both the exact scheduling oracle and the layered IP of the approximation
scheme are instances of this problem.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class Task:
    id: Hashable
    p: int
    resources: frozenset


class BudgetExhausted(Exception):
    pass


@dataclass
class SearchStats:
    nodes: int = 0


def _dilate(mask: int, p: int) -> int:
    """Set bit s whenever some bit in [s, s+p) is set in ``mask``."""
    out = mask
    span = 1
    while span < p:
        step = min(span, p - span)
        out |= out >> step
        span += step
    return out


def _spread(mask: int, p: int) -> int:
    """Times covered by some window [s, s+p) with s in ``mask``."""
    out = mask
    span = 1
    while span < p:
        step = min(span, p - span)
        out |= out << step
        span += step
    return out


class _Search:
    def __init__(self, tasks: Sequence[Task], m: int, K: int, max_nodes, deadline, allowed=None):
        self.tasks = list(tasks)
        self.m = m
        self.K = K
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.stats = SearchStats()
        res_ids = {}
        for t in self.tasks:
            for r in sorted(t.resources, key=repr):
                res_ids.setdefault(r, len(res_ids))
        self.res = [tuple(res_ids[r] for r in t.resources) for t in self.tasks]
        self.busy = [0] * len(res_ids)
        self.used = [0] * K
        self.full = 0
        self.hor = (1 << K) - 1
        self.start: list[int | None] = [None] * len(self.tasks)
        # conflict groups: tasks that share a fixed resource can never run together
        self.group = [min(r) if r else -1 - i for i, r in enumerate(self.res)]
        # optional per-task start restrictions
        self.allow = [-1] * len(self.tasks)
        if allowed:
            for i, t in enumerate(self.tasks):
                if t.id in allowed:
                    self.allow[i] = sum(1 << s for s in set(allowed[t.id]) if 0 <= s <= K)
        # identical unrestricted tasks get strictly increasing starts
        twins: dict = {}
        for i, t in enumerate(self.tasks):
            if self.allow[i] == -1:
                twins.setdefault((t.p, t.resources), []).append(i)
        self.prev_twin = [None] * len(self.tasks)
        self.next_twin = [None] * len(self.tasks)
        for idx in twins.values():
            for a, b in zip(idx, idx[1:]):
                self.prev_twin[b] = a
                self.next_twin[a] = b
        self.strict = [bool(r) for r in self.res]

    def _domain(self, i: int) -> int:
        t = self.tasks[i]
        if t.p > self.K:
            return 0
        blocked = self.full
        for r in self.res[i]:
            blocked |= self.busy[r]
        limit = (1 << (self.K - t.p + 1)) - 1
        dom = ~_dilate(blocked, t.p) & limit & self.allow[i]
        a = self.prev_twin[i]
        while a is not None and self.start[a] is None:
            a = self.prev_twin[a]
        if a is not None:
            lo = self.start[a] + (1 if self.strict[i] else 0)
            dom &= ~((1 << lo) - 1)
        b = self.next_twin[i]
        while b is not None and self.start[b] is None:
            b = self.next_twin[b]
        if b is not None:
            hi = self.start[b] - (1 if self.strict[i] else 0)
            dom &= (1 << (hi + 1)) - 1 if hi >= 0 else 0
        return dom

    def _place(self, i: int, s: int, sign: int) -> None:
        p = self.tasks[i].p
        win = ((1 << p) - 1) << s
        for r in self.res[i]:
            self.busy[r] ^= win
        for t in range(s, s + p):
            self.used[t] += sign
            if sign > 0 and self.used[t] == self.m:
                self.full |= 1 << t
            elif sign < 0 and self.used[t] == self.m - 1:
                self.full &= ~(1 << t)
        self.start[i] = s if sign > 0 else None

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.max_nodes is not None and self.stats.nodes > self.max_nodes:
            raise BudgetExhausted
        if self.deadline is not None and (self.stats.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted

    def run(self) -> bool:
        self._tick()
        open_ = [i for i, s in enumerate(self.start) if s is None]
        if not open_:
            return True
        m, K = self.m, self.K
        free_total = m * K - sum(self.used)
        rem = 0
        doms = {}
        best, best_key = None, None
        for i in open_:
            d = self._domain(i)
            if not d:
                return False
            doms[i] = d
            p = self.tasks[i].p
            rem += p
            key = (d.bit_count(), -p)
            if best_key is None or key < best_key:
                best, best_key = i, key
        if rem > free_total:
            return False
        # per-resource energy
        need: dict[int, int] = {}
        for i in open_:
            for r in self.res[i]:
                need[r] = need.get(r, 0) + self.tasks[i].p
        for r, q in need.items():
            if q > (~(self.busy[r] | self.full) & self.hor).bit_count():
                return False
        # capacity no residual task can use is wasted
        cover: dict[int, int] = {}
        for i in open_:
            g = self.group[i]
            cover[g] = cover.get(g, 0) | _spread(doms[i], self.tasks[i].p)
        waste = 0
        covers = list(cover.values())
        for t in range(K):
            free = m - self.used[t]
            if free:
                bit = 1 << t
                cnt = 0
                for c in covers:
                    if c & bit:
                        cnt += 1
                        if cnt >= free:
                            break
                if cnt < free:
                    waste += free - cnt
        if rem > free_total - waste:
            return False
        d = doms[best]
        while d:
            low = d & -d
            s = low.bit_length() - 1
            d ^= low
            self._place(best, s, +1)
            if self.run():
                return True
            self._place(best, s, -1)
        return False


def find_starts(tasks: Sequence[Task], m: int, K: int, *, max_nodes: int | None = None,
                deadline: float | None = None, stats: SearchStats | None = None,
                allowed: dict | None = None) -> dict | None:
    """Integer start times within [0, K) or None if none exist.

    ``allowed`` optionally maps task ids to the start times they may use.

    Raises :class:`BudgetExhausted` when the node or time budget runs out.
    """
    if K < 0:
        return None
    if not tasks:
        return {}
    s = _Search(tasks, m, K, max_nodes, deadline, allowed)
    try:
        ok = s.run()
    finally:
        if stats is not None:
            stats.nodes += s.stats.nodes
    if not ok:
        return None
    return {t.id: s.start[i] for i, t in enumerate(s.tasks)}


def assign_machines(intervals: Sequence[tuple[Hashable, int, int]], m: int) -> dict:
    """Interval partitioning: (id, start, end) -> machine, lowest free index first."""
    free = list(range(m))
    heapq.heapify(free)
    running: list[tuple[int, int]] = []
    out = {}
    for jid, s, e in sorted(intervals, key=lambda x: (x[1], x[2], repr(x[0]))):
        while running and running[0][0] <= s:
            _, mach = heapq.heappop(running)
            heapq.heappush(free, mach)
        if e == s:
            out[jid] = 0
            continue
        if not free:
            raise ValueError("more than m intervals overlap")
        mach = heapq.heappop(free)
        out[jid] = mach
        heapq.heappush(running, (e, mach))
    return out
