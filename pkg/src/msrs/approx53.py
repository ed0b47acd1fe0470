"""Class-placement algorithm with makespan at most 5/3 of the simple lower bound."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Instance, Job, Schedule, select_T_53, trivial_schedule
from .machines import Block, Machine

FIVE_THIRDS = Fraction(5, 3)


@dataclass(frozen=True)
class SplitResult:
    c1: tuple[Job, ...]
    c2: tuple[Job, ...]


def split_large_class(c: Sequence[Job], T) -> SplitResult:
    """Split a class with p(c) > 2T/3 and no job above T/2 into two parts.

    Guarantees T/3 <= p(c1) <= 2T/3 and p(c2) <= 2T/3.
    """
    T = Fraction(T)
    total = sum(j.p for j in c)
    if not (3 * total > 2 * T) or any(2 * j.p > T for j in c):
        raise ValueError("split_large_class needs p(c) > 2T/3 and every job <= T/2")
    top = next((j for j in c if 3 * j.p > T), None)
    if top is not None:
        c1 = [top]
    else:
        c1, acc = [], 0
        for j in c:
            if 3 * acc >= T:
                break
            c1.append(j)
            acc += j.p
    ids = {j.id for j in c1}
    return SplitResult(tuple(c1), tuple(j for j in c if j.id not in ids))


def schedule_53(instance: Instance, T: Fraction | None = None) -> Schedule:
    if instance.n == 0:
        return {}
    if instance.m >= len(instance.classes):
        return trivial_schedule(instance)
    T = select_T_53(instance) if T is None else Fraction(T)
    m = instance.m
    machines = [Machine(i, FIVE_THIRDS) for i in range(m)]

    def block(k, jobs):
        return Block.of(k, jobs, T)

    big_plus = [k for k, c in enumerate(instance.classes) if any(2 * j.p > T for j in c)]
    assert len(big_plus) <= m
    loads = instance.class_loads()
    large = [k for k in range(len(loads)) if k not in set(big_plus) and 3 * loads[k] > 2 * T]
    rest = [k for k in range(len(loads)) if k not in set(big_plus) and k not in set(large)]

    # step 1: one machine per class with a job above T/2
    for i, k in enumerate(big_plus):
        machines[i].put_bottom(block(k, instance.classes[k]))

    ptr = 0

    def advance():
        nonlocal ptr
        while ptr < m and machines[ptr].closed:
            ptr += 1
        assert ptr < m, "ran out of machines"
        return machines[ptr]

    # step 2: classes heavier than 2T/3, split across two machines when needed
    for k in large:
        c = instance.classes[k]
        cur = advance()
        pc = Fraction(loads[k]) / T
        if cur.load <= FIVE_THIRDS - pc:
            cur.put_bottom(block(k, c))
            if cur.load > 1:
                cur.closed = True
            continue
        parts = split_large_class(c, T)
        b1, b2 = block(k, parts.c1), block(k, parts.c2)
        if b1.size < b2.size:
            b1, b2 = b2, b1
        cur.put_top(b1)
        cur.closed = True
        assert cur.load > 1
        nxt = advance()
        nxt.push_under(b2)
        if nxt.load > 1:
            nxt.closed = True

    # step 3: greedy on the remaining open machines
    for k in rest:
        cur = advance()
        cur.put_bottom(block(k, instance.classes[k]))
        if cur.load > 1:
            cur.closed = True

    sched: Schedule = {}
    for mach in machines:
        assert mach.load <= FIVE_THIRDS
        mach.emit(T, sched)
    return sched
