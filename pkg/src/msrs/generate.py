"""Seeded random instance generator."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Instance

PROFILES = ("uniform", "huge-heavy", "many-light", "adversarial-3/4-boundary")


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int = 0
    profile: str = "uniform"
    m_min: int = 2
    m_max: int = 8
    classes_min: int = 1
    classes_max: int = 8
    jobs_per_class_max: int = 4
    p_max: int = 10
    max_jobs: int = 16

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}; choose from {', '.join(PROFILES)}")
        if not (1 <= self.m_min <= self.m_max):
            raise ValueError("need 1 <= m_min <= m_max")
        if not (1 <= self.classes_min <= self.classes_max):
            raise ValueError("need 1 <= classes_min <= classes_max")
        if self.p_max < 1 or self.jobs_per_class_max < 1 or self.max_jobs < 1:
            raise ValueError("sizes and counts must be positive")


def _trim(rows: list[list[int]], max_jobs: int, rng: random.Random) -> list[list[int]]:
    while sum(map(len, rows)) > max_jobs:
        k = rng.randrange(len(rows))
        rows[k].pop()
        rows = [r for r in rows if r]
    return rows


def _uniform(spec: GeneratorSpec, rng: random.Random) -> tuple[int, list[list[int]]]:
    m = rng.randint(spec.m_min, spec.m_max)
    nc = rng.randint(spec.classes_min, spec.classes_max)
    rows = [[rng.randint(1, spec.p_max) for _ in range(rng.randint(1, spec.jobs_per_class_max))]
            for _ in range(nc)]
    return m, rows


def _huge_heavy(spec: GeneratorSpec, rng: random.Random) -> tuple[int, list[list[int]]]:
    m = rng.randint(spec.m_min, spec.m_max)
    nc = rng.randint(spec.classes_min, spec.classes_max)
    hi = spec.p_max
    rows = []
    for _ in range(nc):
        if rng.random() < 0.5:
            rows.append([rng.randint(max(1, (3 * hi) // 4), hi)])  # one long job
        else:
            k = rng.randint(2, max(2, spec.jobs_per_class_max))
            rows.append([rng.randint(max(1, hi // 4), max(1, hi // 2)) for _ in range(k)])  # heavy load
    return m, rows


def _many_light(spec: GeneratorSpec, rng: random.Random) -> tuple[int, list[list[int]]]:
    m = rng.randint(spec.m_min, spec.m_max)
    nc = spec.classes_max
    small = max(1, spec.p_max // 4)
    rows = [[rng.randint(1, small) for _ in range(rng.randint(1, spec.jobs_per_class_max))] for _ in range(nc)]
    return m, rows


def _boundary(spec: GeneratorSpec, rng: random.Random) -> tuple[int, list[list[int]]]:
    """Classes just below, at and above 3T/4 for a pinned bound T = 4q."""
    q = max(1, rng.randint(1, max(1, spec.p_max // 4)))
    # with m >= 4 the pair bound stays at most 4q, so T = 4q is pinned by the first class
    m = max(4, rng.randint(spec.m_min, spec.m_max))
    rows = [[4 * q], [3 * q], [3 * q + 1]]  # pin, big at exactly 3T/4, huge just above
    rows.append([q, q, q])  # load exactly 3T/4
    rows.append([q, 2 * q - 1])  # load just below 3T/4
    budget = m * 4 * q - sum(map(sum, rows))
    while budget > 0 and len(rows) < spec.classes_max + 3:
        load = rng.randint(1, 2 * q)
        if load > budget:
            break
        rows.append([load])
        budget -= load
    return m, rows


def generate(spec: GeneratorSpec) -> Instance:
    rng = random.Random(f"{spec.seed}:{spec.profile}")
    make = {"uniform": _uniform, "huge-heavy": _huge_heavy, "many-light": _many_light,
            "adversarial-3/4-boundary": _boundary}[spec.profile]
    m, rows = make(spec, rng)
    if spec.profile != "adversarial-3/4-boundary":
        rows = _trim(rows, spec.max_jobs, rng)
    return Instance.from_sizes(m, rows)


def generate_batch(spec: GeneratorSpec, count: int) -> list[Instance]:
    return [generate(GeneratorSpec(**{**spec.__dict__, "seed": spec.seed * 1_000_003 + i})) for i in range(count)]
