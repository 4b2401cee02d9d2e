"""Maximum-weight matching on a :class:`Graph` plus an exhaustive oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .blossom import max_weight_matching_edges
from .core import Graph, Matching, WeightProfile

BRUTE_FORCE_MAX_VERTICES = 20


class GraphTooLargeError(ValueError):
    """Raised when an exhaustive routine is asked to run past its size guard."""


@dataclass(frozen=True)
class MatchingResult:
    matching: Matching
    unmatched: frozenset[int]

    @property
    def weight(self) -> Fraction:
        return self.matching.weight


def _result(graph: Graph, weights, chosen) -> MatchingResult:
    chosen = tuple(sorted(chosen))
    total = sum((weights[k] for k in chosen), Fraction(0))
    covered = {x for k in chosen for x in graph.edges[k]}
    return MatchingResult(
        Matching(chosen, total), frozenset(range(graph.vertex_count)) - covered
    )


def max_weight_matching(graph: Graph, weights: WeightProfile) -> MatchingResult:
    """Blossom-based maximum-weight matching with exact rational duals.

    Zero-weight edges are ignored, so the result need not be maximum
    cardinality.
    """
    if len(weights) != graph.edge_count:
        raise ValueError("weights not aligned with graph edges")
    ids = [k for k in range(graph.edge_count) if weights[k] > 0]
    triples = [(*graph.edges[k], weights[k]) for k in ids]
    picked = max_weight_matching_edges(graph.vertex_count, triples)
    return _result(graph, weights, [ids[p] for p in picked])


def brute_force_matching(graph: Graph, weights: WeightProfile) -> MatchingResult:
    """Enumerate every matching; return the heaviest.

    Ties go to the lexicographically smallest sorted edge-index tuple.
    """
    if graph.vertex_count > BRUTE_FORCE_MAX_VERTICES:
        raise GraphTooLargeError(
            f"{graph.vertex_count} vertices exceeds the exhaustive limit "
            f"of {BRUTE_FORCE_MAX_VERTICES}"
        )
    if len(weights) != graph.edge_count:
        raise ValueError("weights not aligned with graph edges")
    edges = graph.edges
    best_w = Fraction(-1)
    best: tuple[int, ...] = ()
    stack: list[int] = []

    # Edge indices are visited in increasing order, so the first matching
    # reaching a weight is the lexicographically smallest one with it.
    def rec(start: int, used: int, total: Fraction) -> None:
        nonlocal best_w, best
        if total > best_w:
            best_w, best = total, tuple(stack)
        for k in range(start, len(edges)):
            u, v = edges[k]
            bits = (1 << u) | (1 << v)
            if used & bits:
                continue
            stack.append(k)
            rec(k + 1, used | bits, total + weights[k])
            stack.pop()

    rec(0, 0, Fraction(0))
    return _result(graph, weights, best)
