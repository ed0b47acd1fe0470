"""Reduction from Monotone 3-SAT-(2,2) to scheduling with several resources per job.

A reduced instance has makespan 4 exactly when the formula is satisfiable
and makespan 5 otherwise.  Every makespan-4 schedule has the fixed frame

    j^a_i [0,1]  j^A_i [1,4]  j^B_i [0,2]  j^b_i [2,4]
    j^c_d [0,1]  j_dx  [2,4]  literal variable jobs in [0,2]

or its mirror image under t -> 4 - t - p.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .core import MRJob, MultiResourceInstance, Schedule, validate
from .exact import BUDGET, INFEASIBLE, OPTIMAL, SearchLimits, decide_makespan
from .search import assign_machines

SAT_SIDE = "sat-side-4"
UNSAT_SIDE = "unsat-side-5"
INCONCLUSIVE = "inconclusive"

# dummy frame starts (the unflipped orientation)
FRAME = {"ja": 0, "jA": 1, "jB": 0, "jb": 2, "jd": 0, "jdx": 2}


class FormulaError(ValueError):
    """The formula violates a Monotone 3-SAT-(2,2) invariant."""


@dataclass(frozen=True)
class Formula322:
    """Variables 1..n_vars; clauses are triples of signed variable indices."""
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        self.check()

    def check(self) -> None:
        if self.n_vars < 1:
            raise FormulaError("need at least one variable")
        occ = Counter()
        for i, c in enumerate(self.clauses):
            if len(c) != 3:
                raise FormulaError(f"clause {i + 1} has {len(c)} literals, expected 3")
            if any(l == 0 or abs(l) > self.n_vars for l in c):
                raise FormulaError(f"clause {i + 1} references an unknown variable")
            if len({abs(l) for l in c}) != 3:
                raise FormulaError(f"clause {i + 1} repeats a variable")
            if not (all(l > 0 for l in c) or all(l < 0 for l in c)):
                raise FormulaError(f"clause {i + 1} mixes negated and unnegated literals (monotone)")
            occ.update(c)
        for x in range(1, self.n_vars + 1):
            for lit in (x, -x):
                if occ[lit] != 2:
                    raise FormulaError(f"literal {lit} occurs {occ[lit]} times, expected exactly 2 (2,2)")
        assert 3 * len(self.clauses) == 4 * self.n_vars

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)

    def satisfying_assignments(self) -> Iterable[dict[int, bool]]:
        for bits in itertools.product((True, False), repeat=self.n_vars):
            a = {x + 1: b for x, b in enumerate(bits)}
            if self.satisfied_by(a):
                yield a

    def find_witness(self) -> dict[int, bool] | None:
        return next(iter(self.satisfying_assignments()), None)


@dataclass
class GadgetMap:
    jobs: dict[str, int] = field(default_factory=dict)  # gadget name -> job id
    resources: set[str] = field(default_factory=set)

    def name_of(self) -> dict[int, str]:
        return {v: k for k, v in self.jobs.items()}


def _lit_name(l: int) -> str:
    return f"j_x{l}" if l > 0 else f"j_~x{-l}"


def reduce(formula: Formula322) -> tuple[MultiResourceInstance, GadgetMap]:
    formula.check()
    nc, nx = len(formula.clauses), formula.n_vars
    res: dict[str, set[str]] = {}
    sizes: dict[str, int] = {}

    def job(name: str, p: int, *rs: str) -> None:
        sizes[name] = p
        res.setdefault(name, set()).update(rs)

    for i in range(1, nc + 1):
        job(f"jA_{i}", 3, f"A_{i}", f"A_c{i}")
        job(f"ja_{i}", 1, f"A_{i}")
        if i < nc:
            job(f"ja_{i}", 1, f"A_{i}->{i + 1}")
            job(f"jA_{i + 1}", 3, f"A_{i}->{i + 1}")
    for i in range(1, nx + 1):
        job(f"jb_{i}", 2, f"B_{i}")
        job(f"jB_{i}", 2, f"B_{i}", f"B_x{i}")
        if i < nx:
            job(f"jB_{i}", 2, f"B_{i}->{i + 1}")
            job(f"jb_{i + 1}", 2, f"B_{i}->{i + 1}")
    job(f"ja_{nc}", 1, "A->B")
    job("jb_1", 2, "A->B")
    for x in range(1, nx + 1):
        job(f"j_x{x}", 1, f"X_x{x}")
        job(f"j_~x{x}", 1, f"X_x{x}")
        job(f"j_dx{x}", 2, f"X_x{x}", f"B_x{x}")
    for i, c in enumerate(formula.clauses, 1):
        job(f"jc{i}_d", 1, f"C_c{i}", f"A_c{i}")
        for l in c:
            v = f"V^c{i}_x{abs(l)}"
            job(f"jc{i}_x{abs(l)}", 1, f"C_c{i}", v)
            job(_lit_name(l), 1, v)

    # order: dummies, variable jobs, clause jobs
    def order(name: str):
        if name.startswith(("jA", "ja")):
            return (0, int(name.split("_")[1]), name[1] == "a")
        if name.startswith(("jB", "jb")):
            return (1, int(name.split("_")[1]), name[1] == "B")
        if name.startswith("j_"):
            x = int(name.lstrip("j_~dx"))
            return (2, x, ("j_x", "j_~", "j_d").index(name[:3]))
        i, rest = name[2:].split("_")
        return (3, int(i), 0 if rest == "d" else int(rest[1:]))

    names = sorted(sizes, key=order)
    gm = GadgetMap({n: k for k, n in enumerate(names)}, set().union(*res.values()))
    jobs = tuple(MRJob(gm.jobs[n], sizes[n], frozenset(res[n])) for n in names)
    inst = MultiResourceInstance(2 * nc + 2 * nx, jobs)
    users = Counter(r for n in names for r in res[n])
    assert all(v >= 2 for v in users.values())
    assert all(len(j.resources) <= 3 and j.p in (1, 2, 3) for j in jobs)
    assert inst.total() == 4 * inst.m
    return inst, gm


def _with_machines(instance: MultiResourceInstance, gm: GadgetMap, starts: dict[str, int]) -> Schedule:
    ids = {gm.jobs[n]: s for n, s in starts.items()}
    p = {j.id: j.p for j in instance.jobs}
    mach = assign_machines([(j, s, s + p[j]) for j, s in ids.items()], instance.m)
    return {j: (mach[j], Fraction(s)) for j, s in ids.items()}


def _frame(formula: Formula322) -> dict[str, int]:
    starts = {}
    for i in range(1, len(formula.clauses) + 1):
        starts.update({f"ja_{i}": FRAME["ja"], f"jA_{i}": FRAME["jA"], f"jc{i}_d": FRAME["jd"]})
    for i in range(1, formula.n_vars + 1):
        starts.update({f"jB_{i}": FRAME["jB"], f"jb_{i}": FRAME["jb"], f"j_dx{i}": FRAME["jdx"]})
    return starts


def schedule_from_assignment(formula: Formula322, assignment: Mapping[int, bool],
                             instance: MultiResourceInstance, gadgets: GadgetMap) -> Schedule:
    """Makespan-4 schedule from a satisfying assignment."""
    if not formula.satisfied_by(assignment):
        bad = next(i + 1 for i, c in enumerate(formula.clauses)
                   if not any(assignment[abs(l)] == (l > 0) for l in c))
        raise ValueError(f"assignment leaves clause {bad} without a true literal")
    starts = _frame(formula)
    for x in range(1, formula.n_vars + 1):
        starts[f"j_x{x}"] = 0 if assignment[x] else 1
        starts[f"j_~x{x}"] = 1 if assignment[x] else 0
    for i, c in enumerate(formula.clauses, 1):
        first = next(l for l in c if assignment[abs(l)] == (l > 0))
        rest = [l for l in c if l != first]
        for t, l in zip((1, 2, 3), [first] + rest):
            starts[f"jc{i}_x{abs(l)}"] = t
    return _with_machines(instance, gadgets, starts)


def trivial_schedule_5(formula: Formula322, instance: MultiResourceInstance, gadgets: GadgetMap) -> Schedule:
    """Makespan-5 schedule that exists for every formula."""
    starts = _frame(formula)
    for x in range(1, formula.n_vars + 1):
        starts[f"j_x{x}"] = 0
        starts[f"j_~x{x}"] = 1
    for i, c in enumerate(formula.clauses, 1):
        for t, l in zip((2, 3, 4), c):
            starts[f"jc{i}_x{abs(l)}"] = t
    return _with_machines(instance, gadgets, starts)


def flip(instance: MultiResourceInstance, schedule: Schedule, horizon: int = 4) -> Schedule:
    p = {j.id: j.p for j in instance.jobs}
    return {j: (mach, horizon - s - p[j]) for j, (mach, s) in schedule.items()}


def assignment_from_schedule(formula: Formula322, instance: MultiResourceInstance, gadgets: GadgetMap,
                             schedule: Schedule) -> dict[int, bool]:
    """Read a satisfying assignment off a valid makespan-4 schedule."""
    rep = validate(instance, schedule)
    if not rep.valid:
        raise ValueError(f"schedule is invalid: {rep.violations[:3]}")
    if rep.makespan > 4:
        raise ValueError(f"schedule has makespan {rep.makespan}, expected at most 4")
    if schedule[gadgets.jobs["ja_1"]][1] != FRAME["ja"]:
        schedule = flip(instance, schedule)
    a = {x: schedule[gadgets.jobs[f"j_x{x}"]][1] < 1 for x in range(1, formula.n_vars + 1)}
    assert formula.satisfied_by(a)
    return a


@dataclass
class GapResult:
    verdict: str
    makespan: int | None
    witness: dict[int, bool] | None = None
    schedule: Schedule | None = None
    nodes: int = 0


def verify_gap(formula: Formula322, limits: SearchLimits = SearchLimits()) -> GapResult:
    """Confirm makespan 4 (satisfiable) or makespan 5 (unsatisfiable)."""
    inst, gm = reduce(formula)
    witness = formula.find_witness()
    if witness is not None:
        sched = schedule_from_assignment(formula, witness, inst, gm)
        rep = validate(inst, sched)
        assert rep.valid and rep.makespan == 4
        return GapResult(SAT_SIDE, 4, witness, sched)
    res = decide_makespan(inst, 4, limits)
    if res.status == BUDGET:
        return GapResult(INCONCLUSIVE, None, nodes=res.nodes)
    if res.status == OPTIMAL:
        raise AssertionError("unsatisfiable formula admits a makespan-4 schedule")
    assert res.status == INFEASIBLE
    sched = trivial_schedule_5(formula, inst, gm)
    rep = validate(inst, sched)
    assert rep.valid and rep.makespan == 5
    return GapResult(UNSAT_SIDE, 5, None, sched, res.nodes)


# --- formula generation -----------------------------------------------------

def _triples(occurrences: list[int], rng: random.Random, tries: int = 1000) -> list[tuple[int, ...]] | None:
    """Random partition of a multiset of variables into triples of distinct variables."""
    for _ in range(tries):
        rng.shuffle(occurrences)
        cl = [tuple(occurrences[i:i + 3]) for i in range(0, len(occurrences), 3)]
        if all(len(set(c)) == 3 for c in cl):
            return cl
    return None


def random_formula(n_vars: int, rng: random.Random) -> Formula322:
    if n_vars % 3:
        raise FormulaError("the number of variables must be a multiple of 3 (3|C| = 4|X|)")
    while True:
        pos = _triples([x for x in range(1, n_vars + 1) for _ in range(2)], rng)
        neg = _triples([x for x in range(1, n_vars + 1) for _ in range(2)], rng)
        if pos is None or neg is None:
            continue
        clauses = [tuple(sorted(c)) for c in pos] + [tuple(sorted(-x for x in c)) for c in neg]
        rng.shuffle(clauses)
        return Formula322(n_vars, tuple(clauses))


def _partitions(occ: Counter) -> Iterable[list[tuple[int, ...]]]:
    """All partitions of a variable multiset into triples of distinct variables (canonical order)."""
    if not +occ:
        yield []
        return
    first = min(x for x, k in occ.items() if k)
    others = sorted(x for x, k in occ.items() if k and x != first)
    for a, b in itertools.combinations(others, 2):
        rest = occ.copy()
        for x in (first, a, b):
            rest[x] -= 1
        for tail in _partitions(rest):
            yield [(first, a, b)] + tail


def legal_formulas(n_vars: int, orderings: bool = True) -> Iterable[Formula322]:
    """Every legal formula on n_vars variables (clause multisets, optionally every clause order)."""
    occ = Counter({x: 2 for x in range(1, n_vars + 1)})
    pos_parts = list(_partitions(occ))
    seen = set()
    for pos in pos_parts:
        for neg in pos_parts:
            base = [tuple(c) for c in pos] + [tuple(-x for x in c) for c in neg]
            perms = set(itertools.permutations(base)) if orderings else {tuple(sorted(base))}
            for cl in sorted(perms):
                if cl not in seen:
                    seen.add(cl)
                    yield Formula322(n_vars, cl)


def search_unsat(n_vars: int, tries: int, seed: int = 0) -> Formula322 | None:
    """Random search over legal formulas for an unsatisfiable one."""
    rng = random.Random(seed)
    for _ in range(tries):
        f = random_formula(n_vars, rng)
        if f.find_witness() is None:
            return f
    return None


# --- rigidity checks --------------------------------------------------------

def frame_starts(formula: Formula322, gadgets: GadgetMap) -> dict[int, int]:
    """job id -> unflipped frame start for every dummy-anchored job."""
    return {gadgets.jobs[n]: s for n, s in _frame(formula).items()}


def rigidity_check(formula: Formula322, instance: MultiResourceInstance, gadgets: GadgetMap, name: str,
                   limits: SearchLimits = SearchLimits()) -> str:
    """Ask the oracle for a makespan-4 schedule with ``ja_1`` in its frame slot and ``name`` outside its own.

    Returns the oracle status; "infeasible-at-bound" confirms rigidity of ``name``.
    """
    frame = frame_starts(formula, gadgets)
    jid = gadgets.jobs[name]
    if jid not in frame:
        raise ValueError(f"{name} has no fixed frame slot (literal jobs depend on the assignment)")
    a1 = gadgets.jobs["ja_1"]
    if jid == a1:
        # j^a_1 itself fixes the orientation: frame slot or mirrored slot
        allowed = {a1: [s for s in range(4) if s not in (frame[a1], 3 - frame[a1])]}
    else:
        p = next(j.p for j in instance.jobs if j.id == jid)
        allowed = {a1: [frame[a1]], jid: [s for s in range(5 - p) if s != frame[jid]]}
    return decide_makespan(instance, 4, limits, allowed=allowed).status


def sat_formulas_3() -> list[Formula322]:
    """The legal formulas with three variables and four clauses, every clause order."""
    return list(legal_formulas(3))


__all__ = [
    "FRAME", "Formula322", "FormulaError", "GadgetMap", "GapResult", "INCONCLUSIVE", "SAT_SIDE", "UNSAT_SIDE",
    "assignment_from_schedule", "flip", "frame_starts", "legal_formulas", "random_formula", "reduce",
    "rigidity_check", "sat_formulas_3", "schedule_from_assignment", "search_unsat", "trivial_schedule_5",
    "verify_gap",
]
