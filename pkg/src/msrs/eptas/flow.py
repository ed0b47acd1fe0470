"""Integral rounding of a fractional placeholder placement via max flow."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

SOURCE = ("source",)
SINK = ("sink",)


def build_network(fractional: Mapping[tuple[Hashable, Hashable], Fraction],
                  capacities: Mapping[Hashable, int], demands: Mapping[Hashable, int]) -> nx.DiGraph:
    """source -> class (n_c), class -> layer (1 where the fractional value is positive), layer -> sink (k_l)."""
    g = nx.DiGraph()
    for c, n in demands.items():
        g.add_edge(SOURCE, ("class", c), capacity=int(n))
    for l, k in capacities.items():
        g.add_edge(("layer", l), SINK, capacity=int(k))
    for (c, l), v in fractional.items():
        if v > 0:
            g.add_edge(("class", c), ("layer", l), capacity=1)
    return g


def integralize_small_placement(fractional: Mapping[tuple[Hashable, Hashable], Fraction],
                                capacities: Mapping[Hashable, int],
                                demands: Mapping[Hashable, int]) -> dict[tuple[Hashable, Hashable], int]:
    """Turn a feasible fractional placement into a 0/1 one with the same flow value.

    ``fractional[(c, l)]`` is the share of class c placed in layer l,
    ``capacities[l]`` the slot count k_l and ``demands[c]`` the placeholder
    count n_c.  The result puts at most one placeholder of each class in a
    layer, at most k_l placeholders in layer l and exactly n_c of class c.
    """
    for (c, l), v in fractional.items():
        v = Fraction(v)
        if not (0 <= v <= 1):
            raise ValueError(f"fractional value {v} on ({c!r}, {l!r}) outside [0, 1]")
        if c not in demands or l not in capacities:
            raise ValueError(f"arc ({c!r}, {l!r}) references an unknown class or layer")
    for c, n in demands.items():
        got = sum((Fraction(v) for (cc, _), v in fractional.items() if cc == c), Fraction(0))
        if got != n:
            raise ValueError(f"class {c!r}: fractional out-flow {got} differs from demand {n}")
    for l, k in capacities.items():
        got = sum((Fraction(v) for (_, ll), v in fractional.items() if ll == l), Fraction(0))
        if got > k:
            raise ValueError(f"layer {l!r}: fractional in-flow {got} exceeds capacity {k}")

    g = build_network(fractional, capacities, demands)
    target = sum(int(n) for n in demands.values())
    if target == 0:
        return {}
    value, flow = nx.maximum_flow(g, SOURCE, SINK, flow_func=edmonds_karp)
    if value != target:
        raise ValueError(f"max flow {value} is below the total demand {target}")
    out = {}
    for (c, l), v in fractional.items():
        if v > 0:
            f = flow[("class", c)][("layer", l)]
            assert f in (0, 1)
            out[(c, l)] = int(f)
    # conservation at every node
    for c, n in demands.items():
        assert sum(v for (cc, _), v in out.items() if cc == c) == n
    for l, k in capacities.items():
        assert sum(v for (_, ll), v in out.items() if ll == l) <= k
    return out
