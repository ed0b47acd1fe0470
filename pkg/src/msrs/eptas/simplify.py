"""Removal of medium and light-small jobs, rounding and placeholder creation."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from ..core import Job
from .params import AUGMENTED, EptasParams

JobSets = list[list[Job]]


@dataclass
class MediumTrace:
    jobs: list[Job] = field(default_factory=list)  # medium jobs appended at the end
    whole_classes: list[int] = field(default_factory=list)  # augmented: classes moved to extra machines

    def mass(self) -> int:
        return sum(j.p for j in self.jobs)


@dataclass
class SmallTrace:
    tiny: dict[int, list[Job]] = field(default_factory=dict)  # class -> small jobs, mass <= mu T
    light: dict[int, list[Job]] = field(default_factory=dict)  # class -> small jobs, mass in (mu T, delta T]

    @property
    def L(self) -> int:
        return sum(j.p for js in list(self.tiny.values()) + list(self.light.values()) for j in js)


@dataclass(frozen=True)
class LTask:
    """A job of the rounded instance: a big job or one placeholder."""
    key: tuple
    class_id: int
    layers: int
    job: Job | None = None  # the original big job


@dataclass
class LayeredModel:
    params: EptasParams
    n_layers: int
    tasks: list[LTask]
    placeholders: dict[int, list[Job]]  # class -> small jobs represented by placeholders

    @property
    def sizes(self) -> set[int]:
        return {t.layers for t in self.tasks}

    def counts(self) -> dict[tuple[int, int], int]:
        """n^(c)_p: number of tasks of class c with p layers."""
        out: dict[tuple[int, int], int] = {}
        for t in self.tasks:
            out[(t.class_id, t.layers)] = out.get((t.class_id, t.layers), 0) + 1
        return out

    def load_layers(self) -> int:
        return sum(t.layers for t in self.tasks)

    def n_windows(self) -> int:
        return sum(self.n_layers - p + 1 for p in self.sizes if p <= self.n_layers)


def _as_sets(classes) -> JobSets:
    return [list(c) for c in classes]


def remove_medium(classes, params: EptasParams, m: int | None = None) -> tuple[JobSets, MediumTrace]:
    """Drop jobs with size in (mu T, delta T].

    In augmented mode a class whose medium load exceeds eps T is removed as a
    whole (it later gets an extra machine of its own).
    """
    T, mu, delta, eps = params.T, params.mu, params.delta, params.epsilon
    out: JobSets = []
    trace = MediumTrace()
    for k, c in enumerate(_as_sets(classes)):
        med = [j for j in c if mu * T < j.p <= delta * T]
        if params.mode == AUGMENTED and sum(j.p for j in med) > eps * T:
            trace.whole_classes.append(k)
            out.append([])
            continue
        trace.jobs.extend(med)
        ids = {j.id for j in med}
        out.append([j for j in c if j.id not in ids])
    if m is not None and trace.whole_classes:
        # |C'| eps T < medium mass <= eps^2 m T
        assert len(trace.whole_classes) < eps * m
    return out, trace


def remove_small_light(classes: JobSets, params: EptasParams) -> tuple[JobSets, int, SmallTrace]:
    """Drop small jobs (<= mu T) of every class whose small mass is at most delta T."""
    T, mu, delta = params.T, params.mu, params.delta
    out: JobSets = []
    trace = SmallTrace()
    for k, c in enumerate(classes):
        small = [j for j in c if j.p <= mu * T]
        s = sum(j.p for j in small)
        if small and s <= delta * T:
            (trace.tiny if s <= mu * T else trace.light)[k] = small
            ids = {j.id for j in small}
            out.append([j for j in c if j.id not in ids])
        else:
            out.append(list(c))
    return out, trace.L, trace


def round_and_layer(classes: JobSets, params: EptasParams) -> LayeredModel:
    """Round big jobs up to whole layers; replace remaining small jobs by placeholders."""
    T, mu, xi = params.T, params.mu, params.xi
    tasks: list[LTask] = []
    placeholders: dict[int, list[Job]] = {}
    for k, c in enumerate(classes):
        small = [j for j in c if j.p <= mu * T]
        for j in c:
            if j.p > mu * T:
                assert j.p > params.delta * T, "medium job left in the rounded instance"
                tasks.append(LTask(("big", j.id), k, ceil(Fraction(j.p) / xi), j))
        if small:
            s = sum(j.p for j in small)
            assert s > params.delta * T
            placeholders[k] = small
            for i in range(ceil(Fraction(s) / xi)):
                tasks.append(LTask(("ph", k, i), k, 1))
    model = LayeredModel(params, params.n_layers, tasks, placeholders)
    _check_size_bounds(model)
    return model


def _check_size_bounds(model: LayeredModel) -> None:
    p = model.params
    inv = 1 / (p.epsilon * p.delta)
    # rounded sizes are at most ceil(T / xi) layers; one more value for placeholders
    assert len(model.sizes) <= floor(inv) + 2
    assert model.n_layers <= (1 + 2 * p.epsilon) * inv
    assert model.n_windows() <= model.n_layers * len(model.sizes)
