"""Parameter choice for the approximation scheme."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from ..core import Instance

FIXED = "fixed-m"
AUGMENTED = "augmented"
MODES = (FIXED, AUGMENTED)


@dataclass(frozen=True)
class EptasParams:
    epsilon: Fraction
    mode: str
    T: Fraction
    delta: Fraction
    k: int  # delta = epsilon ** k
    extended: bool = False  # no candidate in the nominal range qualified

    @property
    def mu(self) -> Fraction:
        return self.epsilon ** 2 * self.delta

    @property
    def xi(self) -> Fraction:
        """Layer width."""
        return self.epsilon * self.delta * self.T

    @property
    def T_prime(self) -> Fraction:
        return (1 + 2 * self.epsilon) * self.T

    @property
    def n_layers(self) -> int:
        return int((self.T_prime / self.xi).__floor__())

    def bound(self) -> Fraction:
        """Makespan guarantee for an accepted guess: (1+eps)(1+2eps)T + 2 eps T."""
        e = self.epsilon
        return (1 + e) * (1 + 2 * e) * self.T + 2 * e * self.T


def normalize_epsilon(epsilon) -> Fraction:
    """Round epsilon down to the nearest 1/q so that layer counts are integral."""
    e = Fraction(epsilon)
    if not (0 < e <= Fraction(1, 2)):
        raise ValueError("epsilon must lie in (0, 1/2]")
    return Fraction(1, ceil(1 / e))


def candidate_range(m: int, epsilon: Fraction, mode: str) -> int:
    if mode == FIXED:
        return ceil(2 * m / epsilon)
    if mode == AUGMENTED:
        return ceil(2 / epsilon ** 2)
    raise ValueError(f"unknown mode {mode!r}")


def delta_masses(instance: Instance, T: Fraction, delta: Fraction, epsilon: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """(medium mass, light mass of jobs <= delta T, light mass of jobs <= mu T)."""
    mu = epsilon ** 2 * delta
    lo, hi = mu * T, delta * T
    medium = sum((j.p for j in instance.jobs if lo < j.p <= hi), 0)
    light_le_delta = 0
    light_small = 0
    for c in instance.classes:
        s = sum(j.p for j in c if j.p <= hi)
        if lo < s <= hi:
            light_le_delta += s
        t = sum(j.p for j in c if j.p <= lo)
        if lo < t <= hi:
            light_small += t
    return Fraction(medium), Fraction(light_le_delta), Fraction(light_small)


def mass_bound(m: int, T: Fraction, epsilon: Fraction, mode: str) -> Fraction:
    return epsilon * T if mode == FIXED else epsilon ** 2 * m * T


def choose_delta(instance: Instance, epsilon, T, mode: str) -> EptasParams:
    """Largest delta = eps^k (smallest k) whose three masses stay within the mode's bound.

    The nominal candidate range is k = 1..2m/eps (fixed-m) or 1..2/eps^2
    (augmented).  If none qualifies, k keeps growing until one does and the
    result is flagged as extended; this always terminates because every mass
    vanishes once delta T drops below the smallest job.
    """
    eps = Fraction(epsilon)
    T = Fraction(T)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    bound = mass_bound(instance.m, T, eps, mode)
    nominal = candidate_range(instance.m, eps, mode)
    k = 1
    while True:
        delta = eps ** k
        if all(x <= bound for x in delta_masses(instance, T, delta, eps)):
            return EptasParams(eps, mode, T, delta, k, extended=k > nominal)
        k += 1
