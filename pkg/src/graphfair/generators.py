"""Instance families: small worst-case constructions and seeded random graphs.

Every structured family checks its defining properties against the oracles
when it is built (where the instance is small enough), and raises
:class:`GateError` if a property fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import Allocation, Graph, Instance, WeightProfile, as_weight, utility
from .ef1 import is_ef1
from .matching import max_weight_matching
from .mms import greedy_partition
from .oracle import (
    AllocationEnumerator,
    exact_max_ef1_welfare,
    exact_mms,
    max_social_welfare_exact,
    max_social_welfare_matching,
)

FAMILIES = (
    "crossing",
    "heavy-path",
    "disjoint-edges",
    "binary-tight",
    "two-agent-tight",
    "homog-tight",
    "random",
)


class GateError(RuntimeError):
    """A generated instance does not have the properties it was built for."""


def _gate(ok: bool, message: str) -> None:
    if not ok:
        raise GateError(message)


def _profile(edges, valued: dict) -> WeightProfile:
    return WeightProfile(valued.get(e, 0) for e in edges)


def gen_crossing(n: int = 2) -> Instance:
    """Two agents valuing the two perfect matchings of a 4-cycle."""
    if n != 2:
        raise ValueError("the crossing instance is defined for two agents")
    edges = [(0, 1), (2, 3), (0, 2), (1, 3)]
    g = Graph(4, edges)
    first = _profile(edges, {(0, 1): 1, (2, 3): 1})
    second = _profile(edges, {(0, 2): 1, (1, 3): 1})
    inst = Instance(g, 2, (first, second))
    _gate(all(exact_mms(inst, i) == 1 for i in range(2)), "crossing: MMS is not 1")
    _gate(
        all(
            min(utility(inst, i, b) for i, b in enumerate(x.bundles)) == 0
            for x in AllocationEnumerator(2, 4)
        ),
        "crossing: some allocation satisfies both agents",
    )
    return inst


def gen_heavy_path(delta=8) -> Instance:
    """Homogeneous two-agent path with weights ``(1, delta, 1)``."""
    delta = as_weight(delta)
    if not delta > 2:
        raise ValueError("delta must exceed 2")
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    inst = Instance.homogeneous_instance(g, 2, [1, delta, 1])
    _gate(exact_mms(inst, 0) == 1, "heavy-path: MMS is not 1")
    res = max_weight_matching(g, inst.profiles[0])
    _gate(res.matching.edges == (1,), "heavy-path: matching is not the middle edge")
    return inst


def gen_disjoint_edges(n: int, eps=None) -> Instance:
    """``n`` disjoint edges; agent 0 values each at 1, the rest at ``eps``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    eps = Fraction(1, n * n) if eps is None else as_weight(eps)
    if n > 1 and not 0 < eps < 1 - Fraction(1, n):
        raise ValueError("eps must lie strictly between 0 and 1 - 1/n")
    g = Graph(2 * n, [(2 * i, 2 * i + 1) for i in range(n)])
    profiles = (WeightProfile([1] * n),) + tuple(WeightProfile([eps] * n) for _ in range(n - 1))
    inst = Instance(g, n, profiles)
    _gate(max_social_welfare_matching(inst) == n, "disjoint-edges: sw* is not n")
    return inst


@dataclass(frozen=True)
class BinaryTightLayout:
    """Vertex labels of the binary tight family for a given ``k``."""

    k: int
    v: dict = field(repr=False)
    vp: dict = field(repr=False)
    a: dict = field(repr=False)

    @classmethod
    def build(cls, k: int) -> BinaryTightLayout:
        nxt = iter(range(6 * k))
        v = {(i, j): next(nxt) for i in range(1, k + 1) for j in (1, 2)}
        vp = {(i, j): next(nxt) for i in range(1, k + 1) for j in (1, 2)}
        a = {(i, 1): next(nxt) for i in range(1, k + 1)}
        a.update({(i, 2): next(nxt) for i in range(1, k)})
        return cls(k, v, vp, a)

    @property
    def vertex_count(self) -> int:
        return 6 * self.k - 1

    def worst_case_bundles(self) -> tuple[frozenset[int], frozenset[int]]:
        """An EF1 split worth ``k + 3`` in total (``k + 1`` to the second agent, 2 to the first)."""
        k, v, vp, a = self.k, self.v, self.vp, self.a
        second = {v[i, 1] for i in range(2, k + 1)} | {vp[i, 1] for i in range(2, k + 1)}
        second |= {a[1, 1], a[1, 2], a[2, 1], a[2, 2]}
        second |= {a[i, 1] for i in range(4, k + 1)}
        first = frozenset(range(self.vertex_count)) - second
        return first, frozenset(second)


def gen_binary_tight(k: int) -> Instance:
    """Binary two-agent family with ``sw* = 3k - 1``.

    The second agent values the ``v``-``v'`` spokes and the ``a``-pair edges;
    the first values the ``v_i1``-``v_i2`` rungs and the edges joining every
    ``a_i1`` to ``v_11, v_12, v_21, v_22``.
    """
    if k <= 4:
        raise ValueError("k must exceed 4")
    lay = BinaryTightLayout.build(k)
    v, vp, a = lay.v, lay.vp, lay.a
    spokes = [(v[i, j], vp[i, j]) for i in range(1, k + 1) for j in (1, 2)]
    rungs = [(v[i, 1], v[i, 2]) for i in range(1, k + 1)]
    pairs = [(a[i, 1], a[i, 2]) for i in range(1, k)]
    hubs = [
        (a[i, 1], v[t])
        for i in range(1, k + 1)
        for t in ((1, 1), (1, 2), (2, 1), (2, 2))
    ]
    edges = spokes + rungs + pairs + hubs
    g = Graph(lay.vertex_count, edges)
    first = WeightProfile([0] * len(spokes) + [1] * len(rungs) + [0] * len(pairs) + [1] * len(hubs))
    second = WeightProfile([1] * len(spokes) + [0] * len(rungs) + [1] * len(pairs) + [0] * len(hubs))
    inst = Instance(g, 2, (first, second))
    _gate(max_social_welfare_matching(inst) == 3 * k - 1, "binary-tight: sw* is not 3k-1")
    _gate(utility(inst, 1, g.vertices) == 3 * k - 1, "binary-tight: second agent alone is not optimal")
    return inst


def gen_two_agent_tight(eps=Fraction(1, 100)) -> Instance:
    """Two agents: a perfect matching worth 3 to the first, a sparse web worth ``eps`` per edge to the second.

    Whenever the first agent holds two of its edges, the second agent's
    bundle has no edge it values, so EF1 caps the welfare at ``1 + 2 eps``.
    """
    eps = as_weight(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie strictly between 0 and 1/2")
    heavy = [(0, 1), (2, 3), (4, 5)]
    light = [(0, 2), (1, 3), (2, 4), (3, 5), (0, 4), (1, 5)]
    edges = heavy + light
    g = Graph(6, edges)
    first = WeightProfile([1] * 3 + [0] * 6)
    second = WeightProfile([0] * 3 + [eps] * 6)
    inst = Instance(g, 2, (first, second))
    _gate(max_social_welfare_exact(inst)[0] == 3, "two-agent-tight: sw* is not 3")
    _gate(exact_max_ef1_welfare(inst)[0] == 1 + 2 * eps, "two-agent-tight: EF1 welfare is not 1 + 2 eps")
    return inst


# Component of the homogeneous family: a unique perfect matching of three
# weight-2 edges, plus four chords so that deleting any vertex still leaves
# two disjoint edges worth at least (2 + eps) + (2 - eps^2).
_COMPONENT_MATCHED = ((0, 1), (2, 3), (4, 5))
_COMPONENT_CHORDS = (((0, 2), "up"), ((0, 3), "down"), ((1, 4), "up"), ((1, 5), "down"))


def gen_homog_tight(n: int, eps=None) -> Instance:
    """Homogeneous family where the greedy partition of the matching is not EF1.

    ``n - 1`` copies of a six-vertex component (maximum matching 6) and one
    edge of weight ``4 + 3(n-1) eps^2``.  Matched edges are indexed
    round-robin across components so greedy bundles follow components.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    # n = 2 needs eps < 1/4 for the greedy partition to fail EF1.
    eps = min(Fraction(1, n * n), Fraction(1, 3 * n - 1)) if eps is None else as_weight(eps)
    if not 0 < eps <= Fraction(1, n * n):
        raise ValueError("eps must lie in (0, 1/n^2]")
    comps = n - 1
    lone_weight = 4 + 3 * comps * eps * eps
    chord_weight = {"up": 2 + eps, "down": 2 - eps * eps}
    lone = (6 * comps, 6 * comps + 1)
    edges = [lone]
    weights: list[Fraction] = [lone_weight]
    for u, v in _COMPONENT_MATCHED:
        for c in range(comps):
            edges.append((6 * c + u, 6 * c + v))
            weights.append(Fraction(2))
    for c in range(comps):
        for (u, v), kind in _COMPONENT_CHORDS:
            edges.append((6 * c + u, 6 * c + v))
            weights.append(chord_weight[kind])
    g = Graph(6 * comps + 2, edges)
    inst = Instance.homogeneous_instance(g, n, weights)
    res = max_weight_matching(g, inst.profiles[0])
    _gate(res.weight == 6 * comps + lone_weight, "homog-tight: matching weight is not 6(n-1) plus the lone edge")
    gp = greedy_partition(res.matching, inst.profiles[0], n)
    _gate(gp.bundles[-1] == (0,), "homog-tight: lone edge is not the lightest bundle")
    bundles = gp.vertex_bundles(g)
    _gate(
        all(len({x // 6 for x in b}) == 1 for b in bundles),
        "homog-tight: greedy bundles split components",
    )
    _gate(
        not is_ef1(inst, Allocation(tuple(bundles), res.unmatched)),
        "homog-tight: greedy partition is EF1 (eps too large for n)",
    )
    return inst


def _random_weight(rng: random.Random, lo: Fraction, hi: Fraction, denominator: int) -> Fraction:
    a = int(lo * denominator)
    b = int(hi * denominator)
    return Fraction(rng.randint(a, b), denominator)


def gen_random(
    n: int,
    vertices: int,
    edge_prob: float = 0.5,
    weight_range=(1, 16),
    binary: bool = False,
    homogeneous: bool = False,
    seed: int = 0,
    denominator: int = 2,
) -> Instance:
    """Erdos-Renyi graph with small rational weights (multiples of ``1/denominator``)."""
    if not 0 <= edge_prob <= 1:
        raise ValueError("edge_prob must lie in [0, 1]")
    if n < 1 or vertices < 0:
        raise ValueError("need n >= 1 and vertices >= 0")
    lo, hi = (as_weight(x) for x in weight_range)
    if lo > hi:
        raise ValueError("empty weight range")
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(vertices) for v in range(u + 1, vertices) if rng.random() < edge_prob
    ]
    g = Graph(vertices, edges)

    def draw() -> WeightProfile:
        if binary:
            return WeightProfile(rng.randint(0, 1) for _ in edges)
        return WeightProfile(_random_weight(rng, lo, hi, denominator) for _ in edges)

    if homogeneous:
        return Instance.homogeneous_instance(g, n, draw())
    return Instance(g, n, tuple(draw() for _ in range(n)))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")

    def build(self) -> Instance:
        p = self.params
        match self.family:
            case "crossing":
                return gen_crossing(p.get("n", 2))
            case "heavy-path":
                return gen_heavy_path(p.get("delta", 8))
            case "disjoint-edges":
                return gen_disjoint_edges(p.get("n", 3), p.get("eps"))
            case "binary-tight":
                return gen_binary_tight(p.get("k", 5))
            case "two-agent-tight":
                return gen_two_agent_tight(p.get("eps", Fraction(1, 100)))
            case "homog-tight":
                return gen_homog_tight(p.get("n", 3), p.get("eps"))
            case "random":
                keys = ("n", "vertices", "edge_prob", "weight_range", "binary", "homogeneous", "seed")
                return gen_random(**{k: p[k] for k in keys if k in p and p[k] is not None})
        raise AssertionError(self.family)
