"""Graphs, exact weights, instances, allocations and the matching utility."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .blossom import max_weight_matching_edges

Weight = Fraction
VertexSet = frozenset


def as_weight(value) -> Fraction:
    """Coerce ``value`` to an exact nonnegative rational.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats are rejected: a binary float cannot be compared exactly against
    the rational thresholds the algorithms use.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, float):
        raise TypeError(f"float weight {value!r}; pass a Fraction or 'p/q' string")
    if isinstance(value, str):
        value = Fraction(value.strip())
    elif not isinstance(value, (int, Fraction)):
        raise TypeError(f"unsupported weight type {type(value).__name__}")
    w = Fraction(value)
    if w < 0:
        raise ValueError(f"negative weight {w}")
    return w


def format_weight(w: Fraction) -> str:
    """Serialize a weight as ``"p"`` or ``"p/q"`` in lowest terms."""
    w = Fraction(w)
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``.

    Edges are stored canonically as ``(u, v)`` with ``u < v``.  Self-loops,
    out-of-range endpoints and parallel edges raise ``ValueError``.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]] = ()):
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        canon = []
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"parallel edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.vertex_count))

    def edge_index(self, u: int, v: int) -> int:
        return self.edges.index((min(u, v), max(u, v)))


@dataclass(frozen=True)
class WeightProfile:
    """One agent's edge weights, aligned with ``Graph.edges`` by index."""

    weights: tuple[Fraction, ...]

    def __init__(self, weights: Iterable):
        object.__setattr__(self, "weights", tuple(as_weight(w) for w in weights))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k: int) -> Fraction:
        return self.weights[k]

    def __iter__(self):
        return iter(self.weights)

    @property
    def is_binary(self) -> bool:
        return all(w in (0, 1) for w in self.weights)

    def scaled(self, c) -> WeightProfile:
        c = as_weight(c)
        return WeightProfile(w * c for w in self.weights)


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint edge indices together with their total weight."""

    edges: tuple[int, ...]
    weight: Fraction

    def vertices(self, graph: Graph) -> frozenset[int]:
        return frozenset(x for k in self.edges for x in graph.edges[k])


@dataclass(frozen=True)
class Instance:
    """A graph, ``n`` agents and one weight profile per agent.

    ``homogeneous=True`` asserts that all profiles are identical.  Utility
    values are memoized per ``(agent, bundle)``; the cache is invisible to
    equality and hashing.
    """

    graph: Graph
    n: int
    profiles: tuple[WeightProfile, ...]
    homogeneous: bool = False
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        if self.n < 1:
            raise ValueError("need at least one agent")
        if len(self.profiles) != self.n:
            raise ValueError(f"expected {self.n} weight profiles, got {len(self.profiles)}")
        for p in self.profiles:
            if len(p) != self.graph.edge_count:
                raise ValueError("weight profile length does not match edge count")
        if self.homogeneous and any(p != self.profiles[0] for p in self.profiles):
            raise ValueError("homogeneous instance with differing profiles")

    @classmethod
    def homogeneous_instance(cls, graph: Graph, n: int, weights: Iterable) -> Instance:
        profile = weights if isinstance(weights, WeightProfile) else WeightProfile(weights)
        return cls(graph, n, (profile,) * n, homogeneous=True)

    @property
    def is_binary(self) -> bool:
        return all(p.is_binary for p in self.profiles)

    @property
    def identical_profiles(self) -> bool:
        return all(p == self.profiles[0] for p in self.profiles)

    def utility(self, agent: int, bundle: Iterable[int]) -> Fraction:
        return utility(self, agent, bundle)

    def with_profiles(self, profiles: Sequence[WeightProfile], homogeneous=None) -> Instance:
        hom = self.homogeneous if homogeneous is None else homogeneous
        return Instance(self.graph, len(profiles), tuple(profiles), hom)


@dataclass(frozen=True)
class Allocation:
    """Bundles ``X_0..X_{n-1}`` plus the unassigned pool.

    Construct with :meth:`from_bundles` to have the pool derived from the
    vertex count; the raw constructor only checks pairwise disjointness.
    """

    bundles: tuple[frozenset[int], ...]
    pool: frozenset[int] = frozenset()

    def __post_init__(self):
        bundles = tuple(frozenset(b) for b in self.bundles)
        object.__setattr__(self, "bundles", bundles)
        object.__setattr__(self, "pool", frozenset(self.pool))
        seen: set[int] = set(self.pool)
        for b in bundles:
            if seen & b:
                raise ValueError(f"vertices {sorted(seen & b)} assigned twice")
            seen |= b

    @classmethod
    def from_bundles(cls, bundles: Iterable[Iterable[int]], vertex_count: int) -> Allocation:
        bundles = tuple(frozenset(b) for b in bundles)
        used = frozenset().union(*bundles) if bundles else frozenset()
        if any(v < 0 or v >= vertex_count for v in used):
            raise ValueError("allocated vertex out of range")
        return cls(bundles, frozenset(range(vertex_count)) - used)

    @classmethod
    def empty(cls, n: int, vertex_count: int) -> Allocation:
        return cls((frozenset(),) * n, frozenset(range(vertex_count)))

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def is_complete(self) -> bool:
        return not self.pool

    def covered(self) -> frozenset[int]:
        return frozenset().union(self.pool, *self.bundles)

    def validate(self, instance: Instance) -> None:
        """Raise ``ValueError`` unless this allocation partitions ``instance``'s vertices."""
        if self.n != instance.n:
            raise ValueError(f"allocation has {self.n} bundles, instance has {instance.n} agents")
        if self.covered() != instance.graph.vertices:
            raise ValueError("bundles and pool do not cover the vertex set exactly")

    def give(self, agent: int, vertices: Iterable[int]) -> Allocation:
        vs = frozenset(vertices)
        if vs - self.pool:
            raise ValueError(f"vertices {sorted(vs - self.pool)} are not in the pool")
        bundles = list(self.bundles)
        bundles[agent] = bundles[agent] | vs
        return Allocation(tuple(bundles), self.pool - vs)

    def replace(self, agent: int, bundle: Iterable[int]) -> Allocation:
        """Swap in a new bundle for ``agent``; displaced or freed vertices move to the pool."""
        bundles = list(self.bundles)
        old = bundles[agent]
        new = frozenset(bundle)
        bundles[agent] = frozenset()
        others = frozenset().union(*bundles)
        if new & others:
            raise ValueError("new bundle overlaps another agent's bundle")
        bundles[agent] = new
        return Allocation(tuple(bundles), (self.pool | old) - new)


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``G[vertices]`` and a map from its edge indices to ``graph``'s.

    Vertex labels are preserved, so the result has the same vertex count.
    """
    vs = frozenset(vertices)
    bad = [v for v in vs if not 0 <= v < graph.vertex_count]
    if bad:
        raise ValueError(f"vertices {sorted(bad)} out of range")
    back = tuple(k for k, (u, v) in enumerate(graph.edges) if u in vs and v in vs)
    return Graph(graph.vertex_count, [graph.edges[k] for k in back]), back


def bundle_matching_value(
    graph: Graph, weights: Sequence[Fraction], bundle: frozenset[int]
) -> Fraction:
    if len(bundle) < 2:
        return Fraction(0)
    edges = [
        (u, v, weights[k])
        for k, (u, v) in enumerate(graph.edges)
        if u in bundle and v in bundle and weights[k] > 0
    ]
    chosen = max_weight_matching_edges(graph.vertex_count, edges)
    return sum((edges[k][2] for k in chosen), Fraction(0))


def utility(instance: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    """Maximum-weight matching value of ``G[bundle]`` under ``agent``'s weights."""
    if not 0 <= agent < instance.n:
        raise ValueError(f"invalid agent {agent} for {instance.n} agents")
    b = bundle if isinstance(bundle, frozenset) else frozenset(bundle)
    key = (0 if instance.homogeneous else agent, b)
    cache = instance._cache
    if key not in cache:
        if any(v < 0 or v >= instance.graph.vertex_count for v in b):
            raise ValueError("bundle vertex out of range")
        cache[key] = bundle_matching_value(instance.graph, instance.profiles[agent].weights, b)
    return cache[key]


def social_welfare(instance: Instance, allocation: Allocation) -> Fraction:
    return sum(
        (utility(instance, i, x) for i, x in enumerate(allocation.bundles)), Fraction(0)
    )


# -- JSON -----------------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    return {
        "n": instance.n,
        "vertices": instance.graph.vertex_count,
        "edges": [list(e) for e in instance.graph.edges],
        "homogeneous": instance.homogeneous,
        "weights": [[format_weight(w) for w in p] for p in instance.profiles],
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        n = int(data["n"])
        graph = Graph(int(data["vertices"]), [tuple(e) for e in data["edges"]])
        weights = data["weights"]
        homogeneous = bool(data.get("homogeneous", False))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance: {exc}") from exc
    for row in weights:
        for w in row:
            if not isinstance(w, str):
                raise ValueError(f"weights must be rational strings, got {w!r}")
    profiles = tuple(WeightProfile(row) for row in weights)
    if homogeneous and len(profiles) == 1 and n > 1:
        profiles = profiles * n
    return Instance(graph, n, profiles, homogeneous)


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), sort_keys=True)


def loads_instance(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def allocation_to_dict(allocation: Allocation) -> dict:
    return {
        "bundles": [sorted(b) for b in allocation.bundles],
        "pool": sorted(allocation.pool),
    }


def allocation_from_dict(data: dict) -> Allocation:
    try:
        return Allocation(
            tuple(frozenset(int(v) for v in b) for b in data["bundles"]),
            frozenset(int(v) for v in data.get("pool", [])),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed allocation: {exc}") from exc
