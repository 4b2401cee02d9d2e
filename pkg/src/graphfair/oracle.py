"""Exhaustive ground truth for small instances.

Every routine here enumerates all ``n**|V|`` labelled assignments (empty
bundles allowed).  Per-bundle utilities come from a subset DP table built
once per agent, so enumeration itself is table lookups; see
:mod:`graphfair._kernels` for the inner loops.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _kernels
from .core import Allocation, Instance, WeightProfile
from .matching import GraphTooLargeError, max_weight_matching

MAX_VERTICES = 12
MAX_ASSIGNMENTS = 10**8


class InstanceTooLargeError(GraphTooLargeError):
    pass


def check_size(instance: Instance) -> None:
    nv = instance.graph.vertex_count
    if nv > MAX_VERTICES:
        raise InstanceTooLargeError(f"{nv} vertices exceeds oracle limit {MAX_VERTICES}")
    if instance.n**nv > MAX_ASSIGNMENTS:
        raise InstanceTooLargeError(
            f"{instance.n}^{nv} assignments exceeds oracle limit {MAX_ASSIGNMENTS}"
        )


class AllocationEnumerator:
    """Iterate every complete labelled ``n``-partition of the vertices once.

    Order is lexicographic in the assignment tuple ``(owner(v0), owner(v1), ...)``.
    """

    def __init__(self, n: int, vertex_count: int):
        if n < 1:
            raise ValueError("need at least one agent")
        if vertex_count > MAX_VERTICES or n**vertex_count > MAX_ASSIGNMENTS:
            raise InstanceTooLargeError(f"{n}^{vertex_count} assignments is too many")
        self.n = n
        self.vertex_count = vertex_count

    def __len__(self) -> int:
        return self.n**self.vertex_count

    def __iter__(self) -> Iterator[Allocation]:
        for a in range(len(self)):
            yield self.decode(a)

    def decode(self, a: int) -> Allocation:
        owners = _kernels.decode_assignment(a, self.n, self.vertex_count)
        bundles = [set() for _ in range(self.n)]
        for v, i in enumerate(owners):
            bundles[i].add(v)
        return Allocation(tuple(frozenset(b) for b in bundles), frozenset())


def _scale(instance: Instance) -> int:
    return math.lcm(1, *(w.denominator for p in instance.profiles for w in p))


def _tables(instance: Instance, scale: int) -> np.ndarray:
    """Scaled utility table per agent, shape ``(n, 2**V)``."""
    key = ("tables", scale)
    cache = instance._cache
    if key in cache:
        return cache[key]
    g = instance.graph
    biggest = max((sum(p) for p in instance.profiles), default=Fraction(0)) * scale
    dtype = np.int64 if biggest * max(instance.n, 1) < _kernels.INT64_SAFE else object
    eu = np.array([u for u, _ in g.edges], dtype=np.int64)
    ev = np.array([v for _, v in g.edges], dtype=np.int64)
    rows = []
    memo: dict[WeightProfile, np.ndarray] = {}
    for p in instance.profiles:
        if p not in memo:
            ew = np.array([int(w * scale) for w in p], dtype=dtype)
            memo[p] = _kernels.subset_table(g.vertex_count, eu, ev, ew)
        rows.append(memo[p])
    tables = np.ascontiguousarray(np.stack(rows)) if rows else np.zeros((0, 1), dtype=dtype)
    cache[key] = tables
    return tables


def utility_tables(instance: Instance) -> tuple[np.ndarray, int]:
    """Integer tables ``T[i, mask]`` with ``u_i(mask) = T[i, mask] / scale``."""
    scale = _scale(instance)
    return _tables(instance, scale), scale


def _witness(instance: Instance, a: int) -> Allocation:
    return AllocationEnumerator(instance.n, instance.graph.vertex_count).decode(a)


def exact_mms(instance: Instance, agent: int) -> Fraction:
    return mms_partition(instance, agent)[0]


def mms_partition(instance: Instance, agent: int) -> tuple[Fraction, Allocation]:
    """``agent``'s maximin share with a witnessing partition."""
    if not 0 <= agent < instance.n:
        raise ValueError(f"invalid agent {agent}")
    check_size(instance)
    tables, scale = utility_tables(instance)
    row = tables[agent]
    stacked = np.ascontiguousarray(np.stack([row] * instance.n))
    val, a = _kernels.enum_max_min(stacked, instance.n, instance.graph.vertex_count)
    return Fraction(val, scale), _witness(instance, a)


def max_min_own_utility(instance: Instance) -> tuple[Fraction, Allocation]:
    """Best achievable ``min_i u_i(X_i)`` over complete allocations."""
    check_size(instance)
    tables, scale = utility_tables(instance)
    val, a = _kernels.enum_max_min(tables, instance.n, instance.graph.vertex_count)
    return Fraction(val, scale), _witness(instance, a)


def max_metric_profile(instance: Instance) -> WeightProfile:
    return WeightProfile(
        max(p[k] for p in instance.profiles) for k in range(instance.graph.edge_count)
    )


def max_social_welfare_matching(instance: Instance) -> Fraction:
    """Maximum matching weight under the pointwise maximum of all profiles."""
    return max_weight_matching(instance.graph, max_metric_profile(instance)).weight


def max_social_welfare_exact(instance: Instance) -> tuple[Fraction, Allocation]:
    check_size(instance)
    tables, scale = utility_tables(instance)
    val, a = _kernels.enum_max_sum(tables, instance.n, instance.graph.vertex_count)
    return Fraction(val, scale), _witness(instance, a)


def exact_max_ef1_welfare(instance: Instance) -> tuple[Fraction, Allocation]:
    """Maximum welfare over complete EF1 allocations, with witness."""
    check_size(instance)
    tables, scale = utility_tables(instance)
    nv = instance.graph.vertex_count
    drops = np.ascontiguousarray(
        np.stack([_kernels.drop_one_table(t, nv) for t in tables])
    )
    val, a = _kernels.enum_max_sum_ef1(tables, drops, instance.n, nv)
    if a < 0:  # EF1 allocations always exist; reaching here is a bug
        raise AssertionError("no EF1 allocation found")
    return Fraction(val, scale), _witness(instance, a)
