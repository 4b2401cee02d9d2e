"""Max-min (MMS) allocation for homogeneous agents.

Greedy partition of a maximum matching, power-of-two weight rounding, the
heavy-edge halving loop for ``n`` agents (1/8-MMS) and the heavy-edge
deletion loop for two agents (2/3 of the max-min value).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Allocation, Graph, Instance, Matching, WeightProfile, format_weight
from .matching import max_weight_matching

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyPartition:
    """Bundles of edge indices, heaviest first.

    Each bundle lists its edges in the order the greedy rule added them, so
    ``bundles[i][-1]`` is the lightest edge of bundle ``i``.
    """

    bundles: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.bundles)

    def vertex_bundles(self, graph: Graph) -> list[frozenset[int]]:
        return [frozenset(x for k in b for x in graph.edges[k]) for b in self.bundles]


def greedy_partition(matching: Matching, weights: WeightProfile, n: int) -> GreedyPartition:
    """Heaviest edge first, each into the currently lightest bundle.

    Ties: equal-weight edges by edge index, equal-weight bundles to the
    lowest bundle index; the final sort by nonincreasing weight is stable.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    order = sorted(matching.edges, key=lambda k: (-weights[k], k))
    bundles: list[list[int]] = [[] for _ in range(n)]
    totals = [Fraction(0)] * n
    for k in order:
        j = min(range(n), key=lambda b: (totals[b], b))
        bundles[j].append(k)
        totals[j] += weights[k]
    ranked = sorted(range(n), key=lambda b: (-totals[b], b))
    return GreedyPartition(
        tuple(tuple(bundles[b]) for b in ranked), tuple(totals[b] for b in ranked)
    )


def _pow2_floor(w: Fraction) -> Fraction:
    # w >= 1, so floor(w) >= 1 and 2**k <= floor(w) <= w < 2**(k+1).
    return Fraction(1 << (int(w).bit_length() - 1))


def round_down_pow2(instance: Instance) -> Instance:
    """Replace every positive weight by the largest power of two not above it."""
    if not instance.homogeneous:
        raise ValueError("power-of-two rounding is defined for homogeneous instances")
    w = instance.profiles[0]
    if any(0 < x < 1 for x in w):
        raise ValueError("positive weights must be at least 1")
    rounded = WeightProfile(_pow2_floor(x) if x > 0 else x for x in w)
    return Instance.homogeneous_instance(instance.graph, instance.n, rounded)


def _allocation_from_partition(
    graph: Graph, gp: GreedyPartition, unmatched: frozenset[int]
) -> Allocation:
    bundles = gp.vertex_bundles(graph)
    bundles[-1] = bundles[-1] | unmatched
    return Allocation(tuple(bundles), frozenset())


@dataclass(frozen=True)
class Alg1Step:
    """One pass of the halving loop (the first record has no halving)."""

    heavy: tuple[int, ...]
    cap: Fraction | None
    weights: tuple[Fraction, ...]
    matching: tuple[int, ...]
    bundle_weights: tuple[Fraction, ...]
    bundle_sizes: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "heavy_edges": list(self.heavy),
            "cap": None if self.cap is None else format_weight(self.cap),
            "matching": list(self.matching),
            "bundle_weights": [format_weight(w) for w in self.bundle_weights],
        }


@dataclass(frozen=True)
class Alg1Trace:
    steps: tuple[Alg1Step, ...]
    exit_reason: str
    rounded: Instance = field(repr=False)

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps], "exit": self.exit_reason}


def _distinct_positive(weights) -> bool:
    return len({w for w in weights if w > 0}) >= 2


def alg1_mms_homogeneous(instance: Instance) -> tuple[Allocation, Alg1Trace]:
    """1/8-MMS allocation for ``n`` homogeneous agents.

    Works on the power-of-two rounded weights.  While the heaviest greedy
    bundle outweighs twice the lightest and weights still differ, every
    edge at least as heavy as the heavy bundle's single edge is capped at
    half its weight and the matching is recomputed.  Unmatched vertices go
    to the last (lightest) bundle.
    """
    rounded = round_down_pow2(instance)
    graph, n = instance.graph, instance.n
    weights = list(rounded.profiles[0])
    steps = []
    heavy: tuple[int, ...] = ()
    cap = None
    # Each halving pass lowers the top weight class; this cap only guards
    # against an engine defect turning the loop infinite.
    limit = 64 * (graph.edge_count + 1) + sum(int(w).bit_length() for w in weights)
    while True:
        profile = WeightProfile(weights)
        res = max_weight_matching(graph, profile)
        gp = greedy_partition(res.matching, profile, n)
        steps.append(
            Alg1Step(heavy, cap, tuple(weights), res.matching.edges, gp.weights,
                     tuple(len(b) for b in gp.bundles))
        )
        if not gp.weights[0] > 2 * gp.weights[-1]:
            reason = "balanced"
            break
        if not _distinct_positive(weights):
            reason = "uniform-weights"
            break
        if len(steps) > limit:
            raise RuntimeError("halving loop failed to terminate")
        # The heavy bundle holds exactly one edge here: with two or more,
        # the greedy rule forces w(M_1) <= 2 w(M_n).
        (e1,) = gp.bundles[0]
        top = weights[e1]
        heavy = tuple(k for k, w in enumerate(weights) if w >= top)
        cap = top / 2
        for k in heavy:
            weights[k] = cap
        logger.debug("halving %d edges to %s", len(heavy), cap)
    alloc = _allocation_from_partition(graph, gp, res.unmatched)
    return alloc, Alg1Trace(tuple(steps), reason, rounded)


@dataclass(frozen=True)
class Alg2Step:
    deleted: int | None
    matching: tuple[int, ...]
    pair_weights: tuple[Fraction, Fraction]
    best: Fraction
    allocation: Allocation

    def to_dict(self) -> dict:
        return {
            "deleted_edge": self.deleted,
            "matching": list(self.matching),
            "pair_weights": [format_weight(w) for w in self.pair_weights],
            "best": format_weight(self.best),
        }


@dataclass(frozen=True)
class Alg2Trace:
    steps: tuple[Alg2Step, ...]

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps]}

    def best_within(self, deletions: int) -> Fraction:
        """Best recorded value after at most ``deletions`` edge deletions."""
        return self.steps[min(deletions, len(self.steps) - 1)].best


def alg2_maxmin_two(instance: Instance) -> tuple[Allocation, Alg2Trace]:
    """2/3-approximate max-min allocation for two homogeneous agents.

    Repeatedly deletes the lone edge of the heavy greedy bundle while it
    outweighs twice the light one, keeping the best light-bundle value seen.
    """
    if instance.n != 2:
        raise ValueError("the two-agent max-min algorithm needs n == 2")
    if not instance.homogeneous:
        raise ValueError("the two-agent max-min algorithm needs homogeneous agents")
    graph = instance.graph
    weights = list(instance.profiles[0])
    deleted: int | None = None
    steps = []
    best = None
    alloc = None
    while True:
        profile = WeightProfile(weights)
        res = max_weight_matching(graph, profile)
        gp = greedy_partition(res.matching, profile, 2)
        if best is None or best < gp.weights[1]:
            best = gp.weights[1]
            alloc = _allocation_from_partition(graph, gp, res.unmatched)
        steps.append(Alg2Step(deleted, res.matching.edges, gp.weights, best, alloc))
        if not gp.weights[0] > 2 * gp.weights[1]:
            break
        (deleted,) = gp.bundles[0]
        weights[deleted] = Fraction(0)
    return alloc, Alg2Trace(tuple(steps))
