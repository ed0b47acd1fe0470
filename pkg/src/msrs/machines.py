"""Machine model shared by the combinatorial algorithms.

A machine holds a bottom stack (blocks packed upward from time 0) and a top
stack (blocks packed downward from a ceiling such as 3/2 or 5/3).  A block is a
set of jobs of one class that runs consecutively.  All times are in units of T.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Job, Schedule


@dataclass
class Block:
    class_id: int
    jobs: tuple[Job, ...]
    size: Fraction  # scaled length

    @classmethod
    def of(cls, class_id: int, jobs, T: Fraction) -> "Block":
        jobs = tuple(sorted(jobs, key=lambda j: (-j.p, j.id)))
        return cls(class_id, jobs, Fraction(sum(j.p for j in jobs)) / T)


@dataclass
class Machine:
    index: int
    ceiling: Fraction
    bottom: list[Block] = field(default_factory=list)
    top: list[Block] = field(default_factory=list)  # time order, last one ends at ceiling
    closed: bool = False

    @property
    def load(self) -> Fraction:
        return sum((b.size for b in self.bottom), Fraction(0)) + sum((b.size for b in self.top), Fraction(0))

    @property
    def bottom_end(self) -> Fraction:
        return sum((b.size for b in self.bottom), Fraction(0))

    @property
    def top_start(self) -> Fraction:
        return self.ceiling - sum((b.size for b in self.top), Fraction(0))

    @property
    def empty(self) -> bool:
        return not self.bottom and not self.top

    def gap(self) -> Fraction:
        return self.top_start - self.bottom_end

    def put_bottom(self, block: Block) -> None:
        if block.size == 0:
            return
        assert block.size <= self.gap(), f"machine {self.index}: block does not fit"
        self.bottom.append(block)

    def put_top(self, block: Block) -> None:
        if block.size == 0:
            return
        assert block.size <= self.gap(), f"machine {self.index}: block does not fit"
        self.top.insert(0, block)

    def push_under(self, block: Block) -> None:
        """Insert a block at time 0, delaying the whole bottom stack."""
        if block.size == 0:
            return
        assert block.size <= self.gap(), f"machine {self.index}: block does not fit"
        self.bottom.insert(0, block)

    def lift(self) -> None:
        """Move the bottom stack so that it ends where the top stack starts."""
        self.top = self.bottom + self.top
        self.bottom = []

    def intervals(self) -> list[tuple[Fraction, Fraction, Block]]:
        out = []
        t = Fraction(0)
        for b in self.bottom:
            out.append((t, t + b.size, b))
            t += b.size
        t = self.top_start
        for b in self.top:
            out.append((t, t + b.size, b))
            t += b.size
        return out

    def emit(self, T: Fraction, schedule: Schedule) -> None:
        assert self.bottom_end <= self.top_start
        for start, _, block in self.intervals():
            t = start * T
            for j in block.jobs:
                schedule[j.id] = (self.index, t)
                t += j.p


def class_intervals(machines) -> dict[int, list[tuple[Fraction, Fraction]]]:
    out: dict[int, list[tuple[Fraction, Fraction]]] = {}
    for mach in machines:
        for s, e, b in mach.intervals():
            out.setdefault(b.class_id, []).append((s, e))
    return out


def partial_conflicts(machines) -> list[int]:
    """Class ids with overlapping blocks, plus machines whose stacks collide (as -1 - index)."""
    bad = []
    for mach in machines:
        if mach.bottom_end > mach.top_start:
            bad.append(-1 - mach.index)
    for cid, ivs in class_intervals(machines).items():
        ivs.sort()
        for (s1, e1), (s2, e2) in zip(ivs, ivs[1:]):
            if s2 < e1:
                bad.append(cid)
                break
    return bad
