"""The 3/2-approximation: class taxonomy, class splitting and the two schedulers.

Everything inside the schedulers is expressed in units of T (sizes are
``Fraction(p, T)``), so the thresholds read as 1/4, 1/2, 3/4 and the ceiling
of every machine is 3/2.  Start times are multiplied back by T on output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Instance, Job, Schedule, corridor_bound_holds, select_T_32, trivial_schedule
from .machines import Block, Machine, partial_conflicts

Q = Fraction(1, 4)
H = Fraction(1, 2)
TQ = Fraction(3, 4)
CEIL = Fraction(3, 2)


class ClaimError(AssertionError):
    pass


def _ordered(parts_a, parts_b):
    """(check, hat) with p(check) <= p(hat); ties keep the first part as hat."""
    pa, pb = sum(j.p for j in parts_a), sum(j.p for j in parts_b)
    if pa >= pb:
        return tuple(parts_b), tuple(parts_a)
    return tuple(parts_a), tuple(parts_b)


def _greedy_quarter(c: Sequence[Job], T: Fraction) -> list[Job]:
    out, acc = [], 0
    for j in c:
        if 4 * acc > T:
            break
        out.append(j)
        acc += j.p
    return out


def _split_medium_or_greedy(c: Sequence[Job], T: Fraction):
    top = max(c, key=lambda j: j.p)
    if 4 * top.p > T:
        first = [top]
    else:
        first = _greedy_quarter(c, T)
    ids = {j.id for j in first}
    return _ordered(first, [j for j in c if j.id not in ids])


def split_class_geq34(c: Sequence[Job], T) -> tuple[tuple[Job, ...], tuple[Job, ...]]:
    """Split a class with p(c) >= 3T/4 and all jobs <= 3T/4 into (check, hat).

    p(check) <= T/2, p(hat) <= 3T/4 and p(check) <= p(hat).  When no job
    exceeds T/2, one of the parts has size in (T/4, T/2].
    """
    T = Fraction(T)
    total = sum(j.p for j in c)
    if 4 * total < 3 * T or any(4 * j.p > 3 * T for j in c):
        raise ValueError("split_class_geq34 needs p(c) >= 3T/4 and every job <= 3T/4")
    top = max(c, key=lambda j: j.p)
    if 2 * top.p > T:
        return tuple(j for j in c if j.id != top.id), (top,)
    return _split_medium_or_greedy(c, T)


def split_class_mid(c: Sequence[Job], T) -> tuple[tuple[Job, ...], tuple[Job, ...]]:
    """Split a class with T/2 < p(c) <= 3T/4 and all jobs <= T/2 into (check, hat).

    p(check) <= p(hat) <= T/2 and p(hat) > T/4.
    """
    T = Fraction(T)
    total = sum(j.p for j in c)
    if not (2 * total > T and 4 * total <= 3 * T) or any(2 * j.p > T for j in c):
        raise ValueError("split_class_mid needs T/2 < p(c) <= 3T/4 and every job <= T/2")
    return _split_medium_or_greedy(c, T)


@dataclass(frozen=True)
class ClassPartition:
    huge: frozenset[int]
    big: frozenset[int]
    heavy: frozenset[int]  # p(c) >= 3T/4, neither huge nor big
    mid: frozenset[int]  # T/2 < p(c) < 3T/4, no big job
    mid_big: frozenset[int]  # T/2 < p(c) < 3T/4, with a big job
    light: frozenset[int]  # everything else

    @property
    def geq(self) -> frozenset[int]:
        """Non-huge classes with p(c) >= 3T/4."""
        return self.heavy | (self.big - self.mid_big)


def classify(instance: Instance, T) -> ClassPartition:
    T = Fraction(T)
    if T <= 0:
        raise ValueError("T must be positive")
    sets = {k: set() for k in ("huge", "big", "heavy", "mid", "mid_big", "light")}
    for k, c in enumerate(instance.classes):
        top = max(j.p for j in c)
        load = sum(j.p for j in c)
        if 4 * top > 3 * T:
            sets["huge"].add(k)
            continue
        is_big = 2 * top > T
        if is_big:
            sets["big"].add(k)
        if 4 * load >= 3 * T:
            if not is_big:
                sets["heavy"].add(k)
        elif 2 * load > T:
            sets["mid_big" if is_big else "mid"].add(k)
        elif not is_big:
            sets["light"].add(k)
    return ClassPartition(**{k: frozenset(v) for k, v in sets.items()})


# ---------------------------------------------------------------------------
# residual state


@dataclass
class Piece:
    """A residual class: its whole block and, when split, its (check, hat) blocks."""
    cid: int
    whole: Block
    check: Block | None = None
    hat: Block | None = None
    big: bool = False  # contains a job in (T/2, 3T/4]

    @property
    def size(self) -> Fraction:
        return self.whole.size

    @property
    def geq(self) -> bool:
        return self.size >= TQ

    @property
    def mid(self) -> bool:
        return H < self.size < TQ


@dataclass
class TraceEvent:
    step: str
    claim: str
    ok: bool

    def __str__(self):
        return f"[{'ok' if self.ok else 'FAIL'}] {self.step}: {self.claim}"


@dataclass
class ResidualState:
    T: Fraction
    machines: list[Machine]
    unused: list[int]
    open_huge: list[int] = field(default_factory=list)
    residual: list[Piece] = field(default_factory=list)
    check: bool = False
    trace: list[TraceEvent] | None = None
    pending: int | None = None  # class split across m0 awaiting rotation

    def take_machine(self) -> Machine:
        if not self.unused:
            raise ClaimError("no unused machine left")
        return self.machines[self.unused.pop(0)]

    def close(self, mach: Machine) -> None:
        mach.closed = True
        if mach.index in self.open_huge:
            self.open_huge.remove(mach.index)

    def remove(self, piece: Piece) -> None:
        self.residual.remove(piece)

    def claim(self, step: str, text: str, cond) -> None:
        if self.trace is None and not self.check:
            return
        ok = bool(cond() if callable(cond) else cond)
        if self.trace is not None:
            self.trace.append(TraceEvent(step, text, ok))
        if self.check and not ok:
            raise ClaimError(f"{step}: {text}")

    # shared claim bundles

    def residual_big(self):
        return [p for p in self.residual if p.big]

    def residual_heavy(self):
        return [p for p in self.residual if p.geq and not p.big]

    def common_claims(self, step: str, invariant: bool = True) -> None:
        if self.trace is None and not self.check:
            return
        self.claim(step, "partial schedule is feasible", lambda: not [c for c in partial_conflicts(self.machines) if c != self.pending])
        self.claim(step, "all scheduled jobs finish by 3/2",
                   lambda: all(m.bottom_end <= m.top_start for m in self.machines))
        closed = [m for m in self.machines if m.closed]
        self.claim(step, "closed machines carry load >= |M_c|",
                   lambda: sum((m.load for m in closed), Fraction(0)) >= len(closed))
        if invariant:
            nb = len(self.residual_big())
            nh = len(self.residual_heavy())
            self.claim(step, "|M_u| >= max(|C_B|, ceil((|C_B| + |C_heavy|)/2))",
                       lambda: len(self.unused) >= max(nb, -(-(nb + nh) // 2)))
            self.claim(step, "p(M_H) + p(residual) <= |M_u| + |M_H|",
                       lambda: sum((self.machines[i].load for i in self.open_huge), Fraction(0))
                       + sum((p.size for p in self.residual), Fraction(0))
                       <= len(self.unused) + len(self.open_huge))


def _pieces(instance: Instance, T: Fraction) -> tuple[list[Piece], list[Piece]]:
    """Glue/split classes into pseudo-jobs; returns (huge pieces, other pieces)."""
    huge, rest = [], []
    for k, c in enumerate(instance.classes):
        whole = Block.of(k, c, T)
        top = max(j.p for j in c)
        is_big = 2 * top > T and 4 * top <= 3 * T
        if 4 * top > 3 * T:
            huge.append(Piece(k, whole))
            continue
        if whole.size >= TQ:
            chk, hat = split_class_geq34(c, T)
        elif whole.size > H and is_big:
            chk, hat = tuple(j for j in c if j.id != max(c, key=lambda j: j.p).id), (max(c, key=lambda j: j.p),)
        elif whole.size > H:
            chk, hat = split_class_mid(c, T)
        else:
            rest.append(Piece(k, whole))
            continue
        rest.append(Piece(k, whole, Block.of(k, chk, T), Block.of(k, hat, T), is_big))
    return huge, rest


# ---------------------------------------------------------------------------
# Algorithm for instances without huge jobs


def _greedy(state: ResidualState, smalls: Iterable[Piece], current: Machine | None = None) -> None:
    """Place whole classes bottom-up, closing a machine once its load reaches 1."""
    for piece in sorted(smalls, key=lambda p: (-p.size, p.cid)):
        if current is None or current.closed:
            current = state.take_machine()
        current.put_bottom(piece.whole)
        state.remove(piece)
        if current.load >= 1:
            state.close(current)


def schedule_no_huge(state: ResidualState) -> None:
    """Schedule all residual pieces on the unused machines of ``state``.

    Pre: no residual piece contains a job above 3T/4 and the residual load is
    at most the number of unused machines.
    """
    tag = "no_huge"
    if any(p.hat is None and p.geq for p in state.residual):
        raise ValueError("schedule_no_huge: residual class of size >= 3/4 without a split")
    if any(max(j.p for j in p.whole.jobs) * 4 > 3 * state.T for p in state.residual):
        raise ValueError("schedule_no_huge: residual instance contains a huge job")
    state.claim(tag, "residual load <= |M_u|",
                lambda: sum((p.size for p in state.residual), Fraction(0)) <= len(state.unused))

    def mids():
        return [p for p in state.residual if p.mid]

    def geqs():
        return [p for p in state.residual if p.geq]

    def smalls():
        return [p for p in state.residual if p.size <= H]

    # step 2: two classes in (1/2, 3/4) per machine
    while len(mids()) >= 2:
        c1, c2 = mids()[:2]
        mach = state.take_machine()
        mach.put_bottom(c1.whole)
        mach.put_top(c2.whole)
        state.remove(c1)
        state.remove(c2)
        state.close(mach)
    state.claim(f"{tag}.2", "|C_(1/2,3/4)| <= 1", len(mids()) <= 1)
    state.common_claims(f"{tag}.2", invariant=False)

    # step 3: four classes >= 3/4 on three machines
    while len(geqs()) >= 4:
        c1, c2, c3, c4 = geqs()[:4]
        a, b, c = state.take_machine(), state.take_machine(), state.take_machine()
        a.put_bottom(c1.hat)
        a.put_top(c2.hat)
        b.put_bottom(c3.whole)
        b.put_top(c1.check)
        c.put_bottom(c2.check)
        c.put_bottom(c4.whole)
        for p in (c1, c2, c3, c4):
            state.remove(p)
        for mach in (a, b, c):
            state.close(mach)
    state.claim(f"{tag}.3", "|C_(1/2,3/4)| <= 1 and |C_>=3/4| <= 3", len(mids()) <= 1 and len(geqs()) <= 3)
    state.common_claims(f"{tag}.3", invariant=False)

    # step 4: two classes >= 3/4 plus one class in (1/2, 3/4)
    if len(geqs()) >= 2 and len(mids()) == 1:
        c1, c2 = geqs()[:2]
        c3 = mids()[0]
        a, b = state.take_machine(), state.take_machine()
        a.put_bottom(c3.whole)
        a.put_top(c1.hat)
        b.put_bottom(c1.check)
        b.put_bottom(c2.whole)
        for p in (c1, c2, c3):
            state.remove(p)
        state.close(a)
        state.close(b)
    state.claim(f"{tag}.4", "(|C_mid| = 0 and |C_>=3/4| <= 3) or (|C_mid| = 1 and |C_>=3/4| <= 1)",
                (not mids() and len(geqs()) <= 3) or (len(mids()) == 1 and len(geqs()) <= 1))
    state.common_claims(f"{tag}.4", invariant=False)

    large = sorted([p for p in state.residual if p.size > H], key=lambda p: (-p.size, p.cid))
    if len(large) <= 1:
        # step 5
        cur = None
        if large:
            cur = state.take_machine()
            cur.put_bottom(large[0].whole)
            state.remove(large[0])
        _greedy(state, smalls(), cur)
    elif len(large) == 2:
        # step 6
        c1, c2 = large
        state.claim(f"{tag}.6", "p(c1) >= 3/4", c1.size >= TQ)
        if c2.size <= TQ:
            if c1.size + c2.size <= CEIL:
                mach = state.take_machine()
                mach.put_bottom(c1.whole)
                mach.put_top(c2.whole)
                state.close(mach)
                state.remove(c1)
                state.remove(c2)
                _greedy(state, smalls())
            else:
                a = state.take_machine()
                a.put_bottom(c2.whole)
                a.put_top(c1.hat)
                state.close(a)
                b = state.take_machine()
                b.put_bottom(c1.check)
                state.remove(c1)
                state.remove(c2)
                _greedy(state, smalls(), b)
        elif c1.hat.size + c2.hat.size <= 1:
            a = state.take_machine()
            a.put_bottom(c2.whole)
            a.put_bottom(c1.hat)
            state.close(a)
            b = state.take_machine()
            b.put_bottom(c1.check)
            state.remove(c1)
            state.remove(c2)
            _greedy(state, smalls(), b)
        else:
            a = state.take_machine()
            a.put_bottom(c1.hat)
            a.put_top(c2.hat)
            state.close(a)
            b = state.take_machine()
            b.put_bottom(c2.check)
            b.put_top(c1.check)
            state.remove(c1)
            state.remove(c2)
            _greedy(state, smalls(), b)
    else:
        # step 7
        state.claim(f"{tag}.7", "three residual classes, all >= 3/4", len(large) == 3 and all(p.geq for p in large))
        small_hat = [p for p in large if p.hat.size <= H]
        if small_hat:
            c1 = small_hat[0]
            c2, c3 = [p for p in large if p is not c1]
            a, b = state.take_machine(), state.take_machine()
            a.put_bottom(c1.hat)
            a.put_bottom(c2.whole)
            b.put_bottom(c3.whole)
            b.put_top(c1.check)
            state.close(a)
            state.close(b)
            for p in large:
                state.remove(p)
            _greedy(state, smalls())
        else:
            c1, c2, c3 = large
            if c1.check.size + c2.check.size + c3.size <= CEIL:
                a, b = state.take_machine(), state.take_machine()
                a.put_bottom(c1.hat)
                a.put_top(c2.hat)
                b.put_bottom(c2.check)
                b.put_bottom(c3.whole)
                b.put_top(c1.check)
                state.close(a)
                state.close(b)
                for p in large:
                    state.remove(p)
                _greedy(state, smalls())
            else:
                if not c1.check.size > Q:
                    c1, c2 = c2, c1
                state.claim(f"{tag}.7", "p(check c1) > 1/4", c1.check.size > Q)
                a, b = state.take_machine(), state.take_machine()
                a.put_bottom(c1.hat)
                a.put_top(c2.hat)
                b.put_bottom(c3.whole)
                b.put_top(c1.check)
                state.close(a)
                state.close(b)
                c = state.take_machine()
                c.put_bottom(c2.check)
                for p in large:
                    state.remove(p)
                _greedy(state, smalls(), c)
    state.claim(f"{tag}.end", "every residual class is scheduled", not state.residual)
    state.common_claims(f"{tag}.end", invariant=False)


# ---------------------------------------------------------------------------
# general algorithm


def _rotate(m0: Machine, piece_top: Block, others: list[Machine]) -> None:
    """Move the partial piece on m0 to the bottom or the top so it avoids its sibling."""
    sib = [(s, e) for mach in others if mach is not m0
           for s, e, b in mach.intervals() if b.class_id == piece_top.class_id]
    assert len(sib) == 1
    s, e = sib[0]
    m0.bottom = [b for b in m0.bottom if b is not piece_top]
    m0.top = [b for b in m0.top if b is not piece_top]
    if s >= piece_top.size:
        m0.push_under(piece_top)
    else:
        m0.put_top(piece_top)
    lo = 0 if m0.bottom and m0.bottom[0] is piece_top else m0.top_start
    assert e <= lo or lo + piece_top.size <= s, "rotation failed"


def _endgame_single_huge(state: ResidualState, step: str) -> None:
    """One open huge machine left: split a non-big class across it and finish."""
    m0 = state.machines[state.open_huge[0]]
    cands = [p for p in state.residual if not p.big]
    c = cands[0]
    part = next((b for b in (c.hat, c.check) if b is not None and Q < b.size <= H), None)
    state.claim(step, "a part of size in (1/4, 1/2] exists", part is not None)
    if part is None:
        raise ClaimError(f"{step}: no part of size in (1/4, 1/2]")
    rest = c.check if part is c.hat else c.hat
    m0.put_bottom(part)
    state.close(m0)
    state.remove(c)
    state.residual.append(Piece(c.cid, rest))
    state.pending = c.cid
    schedule_no_huge(state)
    _rotate(m0, part, state.machines)
    state.pending = None
    state.common_claims(f"{step}.rotate", invariant=False)


def _individual(state: ResidualState, step: str) -> None:
    state.claim(step, "enough unused machines for one per residual class",
                len(state.unused) >= len(state.residual))
    for p in list(state.residual):
        mach = state.take_machine()
        mach.put_bottom(p.whole)
        state.remove(p)


def _run_32(state: ResidualState, huge: list[Piece]) -> None:
    res = state.residual

    def mid_plain():
        return [p for p in res if p.mid and not p.big]

    def mid_big():
        return [p for p in res if p.mid and p.big]

    def geqs():
        return [p for p in res if p.geq]

    # step 2
    for p in huge:
        mach = state.take_machine()
        mach.put_bottom(p.whole)
        if mach.load == 1:
            mach.closed = True
        else:
            state.open_huge.append(mach.index)
    state.claim("2", "open huge machines have load in (3/4, 1)",
                all(TQ < state.machines[i].load < 1 for i in state.open_huge))
    state.common_claims("2")

    # step 3
    smalls = sorted([p for p in res if p.size <= H], key=lambda p: (-p.size, p.cid))
    for i in list(state.open_huge):
        mach = state.machines[i]
        while smalls and mach.load < 1:
            p = smalls.pop(0)
            mach.put_bottom(p.whole)
            state.remove(p)
        if mach.load >= 1:
            state.close(mach)
    if not state.open_huge:
        state.common_claims("3")
        schedule_no_huge(state)
        return
    state.claim("3", "no residual class of size <= 1/2", not any(p.size <= H for p in res))
    state.common_claims("3")

    # step 4
    while len(state.open_huge) >= 2 and mid_plain():
        m1, m2 = (state.machines[i] for i in state.open_huge[:2])
        c = mid_plain()[0]
        m2.lift()
        m1.put_top(c.hat)
        m2.put_bottom(c.check)
        state.close(m1)
        state.close(m2)
        state.remove(c)
    state.common_claims("4")
    if not state.open_huge:
        schedule_no_huge(state)
        return

    # step 5
    if len(state.open_huge) == 1:
        if any(not p.big for p in res):
            _endgame_single_huge(state, "5")
        else:
            _individual(state, "5")
        return

    # step 6
    while state.open_huge and mid_big() and geqs():
        m1 = state.machines[state.open_huge[0]]
        b = mid_big()[0]
        c = geqs()[0]
        m2 = state.take_machine()
        m1.put_top(c.check)
        m2.put_bottom(c.hat)
        m2.put_top(b.whole)
        state.close(m1)
        state.close(m2)
        state.remove(b)
        state.remove(c)
        state.common_claims("6")
    if not state.open_huge:
        schedule_no_huge(state)
        return

    # step 7
    if mid_big():
        state.claim("7", "only big classes in (1/2, 3/4) remain", all(p.mid and p.big for p in res))
        _individual(state, "7")
        return
    state.claim("7", "all residual classes have size >= 3/4", all(p.geq for p in res))

    # step 8
    while len(state.open_huge) >= 2 and len(geqs()) >= 2:
        pool = sorted(geqs(), key=lambda p: not p.big)
        c1, c2 = pool[:2]
        m1, m2 = (state.machines[i] for i in state.open_huge[:2])
        m3 = state.take_machine()
        m2.lift()
        m1.put_top(c1.check)
        m2.put_bottom(c2.check)
        m3.put_bottom(c1.hat)
        m3.put_top(c2.hat)
        for mach in (m1, m2, m3):
            state.close(mach)
        state.remove(c1)
        state.remove(c2)
        state.common_claims("8")
    if not state.open_huge:
        schedule_no_huge(state)
        return

    # step 9
    if len(state.open_huge) >= 2 or not any(not p.big for p in res):
        _individual(state, "9")
        return

    # step 10
    _endgame_single_huge(state, "10")


def schedule_32(instance: Instance, T: Fraction | None = None, *, check: bool = False,
                trace: list[TraceEvent] | None = None) -> Schedule:
    """Schedule with makespan at most 3/2 * select_T_32(instance).

    ``check`` turns every step claim into a runtime assertion; ``trace``
    collects the evaluated claims.
    """
    if instance.n == 0:
        return {}
    if instance.m >= len(instance.classes):
        return trivial_schedule(instance)
    T = select_T_32(instance) if T is None else Fraction(T)
    assert corridor_bound_holds(instance, T)
    machines = [Machine(i, CEIL) for i in range(instance.m)]
    huge, rest = _pieces(instance, T)
    state = ResidualState(T, machines, list(range(instance.m)), residual=rest, check=check, trace=trace)
    state.claim("1", "gluing keeps every class intact",
                sorted(j.id for p in huge + rest for j in p.whole.jobs) == sorted(j.id for j in instance.jobs))
    _run_32(state, huge)
    state.claim("end", "every class is scheduled", not state.residual)
    sched: Schedule = {}
    for mach in machines:
        mach.emit(T, sched)
    return sched
