"""Instances, schedules, validity checking and lower bounds.

All arithmetic on start times and thresholds uses :class:`fractions.Fraction`
so that boundary cases such as ``p == 3/4 * T`` are decided exactly.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, NamedTuple, Sequence

Rat = Fraction

# job id -> (machine, start)
Schedule = dict[int, tuple[int, Fraction]]


class ScheduleError(ValueError):
    """Structural problem with a schedule (unknown or missing job ids)."""


@dataclass(frozen=True)
class Job:
    id: int
    class_id: int
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"job {self.id}: processing time must be >= 1, got {self.p}")


@dataclass(frozen=True)
class Instance:
    m: int
    classes: tuple[tuple[Job, ...], ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one machine")
        seen = set()
        for k, c in enumerate(self.classes):
            if not c:
                raise ValueError(f"class {k} is empty")
            for j in c:
                if j.id in seen:
                    raise ValueError(f"duplicate job id {j.id}")
                seen.add(j.id)

    @classmethod
    def from_sizes(cls, m: int, sizes: Sequence[Sequence[int]]) -> "Instance":
        """Build an instance from nested size lists; ids follow reading order."""
        classes = []
        next_id = 0
        for k, row in enumerate(sizes):
            jobs = []
            for p in row:
                jobs.append(Job(next_id, k, int(p)))
                next_id += 1
            classes.append(tuple(jobs))
        return cls(m, tuple(classes))

    @property
    def jobs(self) -> list[Job]:
        return [j for c in self.classes for j in c]

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    def total(self) -> int:
        return sum(j.p for c in self.classes for j in c)

    def class_loads(self) -> list[int]:
        return [sum(j.p for j in c) for c in self.classes]

    def sizes(self) -> list[list[int]]:
        return [[j.p for j in c] for c in self.classes]

    def job_map(self) -> dict[int, Job]:
        return {j.id: j for c in self.classes for j in c}


def strip_zero_jobs(m: int, sizes: Sequence[Sequence[int]]) -> tuple[Instance, list[int]]:
    """Drop zero-length jobs (and classes left empty) before building an Instance.

    Ids are assigned in reading order over all entries, zeros included, so the
    returned id list can be handed to :func:`restore_zero_jobs` afterwards.
    """
    zero_ids = []
    classes = []
    next_id = 0
    for row in sizes:
        jobs = []
        for p in row:
            if p < 0:
                raise ValueError(f"negative processing time {p}")
            if p == 0:
                zero_ids.append(next_id)
            else:
                jobs.append(p)
            next_id += 1
        classes.append(jobs)
    # second pass so that kept jobs keep their reading-order ids
    kept = []
    next_id = 0
    cid = 0
    for row in sizes:
        jobs = []
        for p in row:
            if p > 0:
                jobs.append(Job(next_id, cid, int(p)))
            next_id += 1
        if jobs:
            kept.append(tuple(jobs))
            cid += 1
    return Instance(m, tuple(kept)), zero_ids


def restore_zero_jobs(schedule: Schedule, zero_ids: Iterable[int]) -> Schedule:
    out = dict(schedule)
    for jid in zero_ids:
        out[jid] = (0, Fraction(0))
    return out


class Violation(NamedTuple):
    kind: str  # "machine-overlap" | "class-overlap" | "machine-out-of-range"
    jobs: tuple[int, ...]


@dataclass
class ValidationReport:
    valid: bool
    makespan: Fraction
    violations: list[Violation] = field(default_factory=list)


def _conflict_keys(instance) -> dict[int, tuple[int, frozenset]]:
    """job id -> (p, resource keys); works for plain and multi-resource instances."""
    if isinstance(instance, Instance):
        return {j.id: (j.p, frozenset((j.class_id,))) for c in instance.classes for j in c}
    return {j.id: (j.p, frozenset(j.resources)) for j in instance.jobs}


def _overlapping_pairs(items: list[tuple[Fraction, Fraction, int]]) -> list[tuple[int, int]]:
    # items: (start, end, id); half-open intervals
    items = sorted(items)
    pairs = []
    for i, (s, e, a) in enumerate(items):
        for s2, e2, b in items[i + 1:]:
            if s2 >= e:
                break
            if e2 > s2 and e > s:
                pairs.append((min(a, b), max(a, b)))
    return pairs


def validate(instance, schedule: Schedule) -> ValidationReport:
    """Check machine and resource non-overlap with half-open intervals.

    Accepts an :class:`Instance` or a multi-resource instance (anything with
    ``m`` and ``jobs`` carrying ``id``, ``p`` and ``resources``).
    Raises :class:`ScheduleError` if the schedule is not a total map over the
    instance's job ids.
    """
    info = _conflict_keys(instance)
    unknown = set(schedule) - set(info)
    if unknown:
        raise ScheduleError(f"unknown job ids in schedule: {sorted(unknown)}")
    missing = set(info) - set(schedule)
    if missing:
        raise ScheduleError(f"jobs missing from schedule: {sorted(missing)}")

    violations: list[Violation] = []
    by_machine = defaultdict(list)
    by_key = defaultdict(list)
    makespan = Fraction(0)
    for jid in sorted(schedule):
        machine, start = schedule[jid]
        start = Fraction(start)
        if start < 0:
            raise ScheduleError(f"job {jid} has negative start {start}")
        p, keys = info[jid]
        end = start + p
        makespan = max(makespan, end)
        if not (0 <= machine < instance.m):
            violations.append(Violation("machine-out-of-range", (jid,)))
        else:
            by_machine[machine].append((start, end, jid))
        for k in keys:
            by_key[k].append((start, end, jid))

    for machine in sorted(by_machine):
        for pair in _overlapping_pairs(by_machine[machine]):
            violations.append(Violation("machine-overlap", pair))
    seen = set()
    for k in sorted(by_key, key=repr):
        for pair in _overlapping_pairs(by_key[k]):
            if pair not in seen:
                seen.add(pair)
                violations.append(Violation("class-overlap", pair))
    return ValidationReport(not violations, makespan, violations)


def makespan(instance, schedule: Schedule) -> Fraction:
    info = _conflict_keys(instance)
    return max((Fraction(s) + info[j][0] for j, (_, s) in schedule.items()), default=Fraction(0))


def lower_bound_basic(instance: Instance) -> Fraction:
    if instance.n == 0:
        return Fraction(0)
    return max(Fraction(instance.total(), instance.m), Fraction(max(instance.class_loads())))


def lower_bound_pairs(instance: Instance) -> Fraction:
    sizes = sorted((j.p for j in instance.jobs), reverse=True)
    m = instance.m
    if len(sizes) < m + 1:
        return Fraction(0)
    return Fraction(sizes[m - 1] + sizes[m])


def select_T_53(instance: Instance) -> Fraction:
    return max(lower_bound_basic(instance), lower_bound_pairs(instance))


def band_counts(instance: Instance, T: Fraction) -> tuple[int, int, int]:
    """(|C_H|, |C_B|, |C_{>=3/4} minus C_H, C_B|) for the instance scaled by T."""
    huge = big = heavy = 0
    for c in instance.classes:
        top = max(j.p for j in c)
        load = sum(j.p for j in c)
        if 4 * top > 3 * T:
            huge += 1
        elif 2 * top > T:
            big += 1
        elif 4 * load >= 3 * T:
            heavy += 1
    return huge, big, heavy


def corridor_bound_holds(instance: Instance, T: Fraction) -> bool:
    """|C_H| + max(|C_B|, ceil((|C_B| + |heavy|) / 2)) <= m."""
    huge, big, heavy = band_counts(instance, T)
    return huge + max(big, -(-(big + heavy) // 2)) <= instance.m


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def T_candidates(instance: Instance) -> list[Fraction]:
    base = select_T_53(instance)
    cands = {base}
    for c in instance.classes:
        top = max(j.p for j in c)
        load = sum(j.p for j in c)
        # integer T at which the class leaves C_H, C_B and C_{>=3/4}
        cands.add(Fraction(_ceil_frac(Fraction(4 * top, 3))))
        cands.add(Fraction(2 * top))
        cands.add(Fraction(4 * load // 3 + 1))
        # thresholds as printed in the original analysis (each >= the exact one)
        cands.add(Fraction(_ceil_frac(Fraction(4 * top + 1, 3))))
        cands.add(Fraction(2 * top + 1))
        cands.add(Fraction(_ceil_frac(Fraction(4 * load + 1, 3))))
    return sorted(t for t in cands if t >= base)


def select_T_32(instance: Instance) -> Fraction:
    """Smallest candidate T >= select_T_53 satisfying the corridor bound.

    The predicate is monotone in T, so a binary search over the sorted
    candidate list is exact.
    """
    if instance.n == 0:
        return Fraction(0)
    cands = T_candidates(instance)
    assert corridor_bound_holds(instance, cands[-1]), "largest candidate must be feasible"
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if corridor_bound_holds(instance, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def trivial_schedule(instance: Instance) -> Schedule:
    """One class per machine if m >= |C|, otherwise everything on machine 0."""
    sched: Schedule = {}
    if instance.m >= len(instance.classes):
        for k, c in enumerate(instance.classes):
            t = 0
            for j in sorted(c, key=lambda j: -j.p):
                sched[j.id] = (k, Fraction(t))
                t += j.p
        return sched
    t = 0
    for j in instance.jobs:
        sched[j.id] = (0, Fraction(t))
        t += j.p
    return sched


@dataclass(frozen=True)
class MRJob:
    id: int
    p: int
    resources: frozenset

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"job {self.id}: processing time must be >= 1, got {self.p}")


@dataclass(frozen=True)
class MultiResourceInstance:
    """Jobs that each lock a set of resources; sharing any resource forbids overlap."""
    m: int
    jobs: tuple[MRJob, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one machine")
        ids = [j.id for j in self.jobs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate job ids")

    @property
    def n(self) -> int:
        return len(self.jobs)

    def total(self) -> int:
        return sum(j.p for j in self.jobs)

    def resource_loads(self) -> dict:
        out: dict = {}
        for j in self.jobs:
            for r in j.resources:
                out[r] = out.get(r, 0) + j.p
        return out
