from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from graphfair.core import Graph, Instance, Matching, WeightProfile, utility
from graphfair.ef1 import ef1_graph
from graphfair.matching import max_weight_matching
from graphfair.mms import (
    alg1_mms_homogeneous,
    alg2_maxmin_two,
    greedy_partition,
    round_down_pow2,
)
from graphfair.oracle import exact_mms

at_least_one = st.integers(min_value=2, max_value=32).map(lambda k: Fraction(k, 2))


def _min_utility(inst, alloc):
    return min(utility(inst, i, b) for i, b in enumerate(alloc.bundles))


def _homog(edges, nv, n, weights):
    return Instance.homogeneous_instance(Graph(nv, edges), n, weights)


def _replay(order_weights, n):
    totals = [Fraction(0)] * n
    for w in order_weights:
        j = min(range(n), key=lambda b: (totals[b], b))
        totals[j] += w
    return sorted(totals, reverse=True)


def test_greedy_examples():
    gp = greedy_partition(Matching((0, 1, 2), Fraction(10)), WeightProfile([5, 3, 2]), 2)
    assert gp.bundles == ((0,), (1, 2)) and gp.weights == (5, 5)
    gp = greedy_partition(Matching(tuple(range(7)), Fraction(7)), WeightProfile([1] * 7), 3)
    assert [len(b) for b in gp.bundles] == [3, 2, 2] and gp.weights[-1] == 2
    gp = greedy_partition(Matching((), Fraction(0)), WeightProfile([]), 4)
    assert gp.bundles == ((),) * 4
    with pytest.raises(ValueError):
        greedy_partition(Matching((), Fraction(0)), WeightProfile([]), 0)


def test_round_down_pow2():
    inst = _homog([(0, 1), (1, 2), (2, 3), (3, 4)], 5, 2, [5, 1, "5/2", 0])
    assert list(round_down_pow2(inst).profiles[0]) == [4, 1, 2, 0]
    with pytest.raises(ValueError):
        round_down_pow2(_homog([(0, 1)], 2, 2, ["1/2"]))
    het = Instance(Graph(2, [(0, 1)]), 2, (WeightProfile([1]), WeightProfile([2])))
    with pytest.raises(ValueError):
        round_down_pow2(het)


def test_alg1_two_disjoint_unit_edges():
    inst = _homog([(0, 1), (2, 3)], 4, 2, [1, 1])
    alloc, trace = alg1_mms_homogeneous(inst)
    assert _min_utility(inst, alloc) == 1 == exact_mms(inst, 0)
    assert trace.exit_reason == "balanced"


def test_alg1_heavy_path_halves_to_one():
    inst = _homog([(0, 1), (1, 2), (2, 3)], 4, 2, [1, 8, 1])
    alloc, trace = alg1_mms_homogeneous(inst)
    assert [s.cap for s in trace.steps] == [None, 4, 2, 1]
    assert alloc.is_complete and _min_utility(inst, alloc) == 1 == exact_mms(inst, 0)


def test_alg2_examples():
    path = _homog([(0, 1), (1, 2), (2, 3)], 4, 2, [1, 8, 1])
    alloc, trace = alg2_maxmin_two(path)
    assert [s.deleted for s in trace.steps] == [None, 1]
    assert _min_utility(path, alloc) == 1 == exact_mms(path, 0)
    three = _homog([(0, 1), (2, 3), (4, 5)], 6, 2, [3, 2, 2])
    alloc, trace = alg2_maxmin_two(three)
    assert trace.steps[0].pair_weights == (4, 3) and len(trace.steps) == 1
    assert _min_utility(three, alloc) == 3 == exact_mms(three, 0)
    single = _homog([(0, 1)], 2, 2, [1])
    alloc, _ = alg2_maxmin_two(single)
    assert alloc.is_complete and exact_mms(single, 0) == 0
    with pytest.raises(ValueError):
        alg2_maxmin_two(_homog([(0, 1)], 2, 3, [1]))


def test_trace_serializes():
    inst = _homog([(0, 1), (1, 2), (2, 3)], 4, 2, [1, 8, 1])
    d = alg1_mms_homogeneous(inst)[1].to_dict()
    assert d["exit"] == "balanced" and d["steps"][1]["cap"] == "4"
    assert alg2_maxmin_two(inst)[1].to_dict()["steps"][1]["deleted_edge"] == 1


@given(instances(max_vertices=9, agents=(1, 2, 3, 4), homogeneous=True))
def test_greedy_partition_invariants(inst):
    w = inst.profiles[0]
    m = max_weight_matching(inst.graph, w).matching
    gp = greedy_partition(m, w, inst.n)
    flat = sorted(k for b in gp.bundles for k in b)
    assert flat == sorted(m.edges)
    assert list(gp.weights) == sorted(gp.weights, reverse=True)
    assert all(sum((w[k] for k in b), Fraction(0)) == t for b, t in zip(gp.bundles, gp.weights))
    order = sorted(m.edges, key=lambda k: (-w[k], k))
    assert list(gp.weights) == _replay([w[k] for k in order], inst.n)
    assert all(w[b[i]] >= w[b[i + 1]] for b in gp.bundles for i in range(len(b) - 1))


@given(instances(max_vertices=10, agents=(2, 3), homogeneous=True, binary=True))
def test_greedy_minimum_is_mms_when_unweighted(inst):
    w = inst.profiles[0]
    gp = greedy_partition(max_weight_matching(inst.graph, w).matching, w, inst.n)
    assert gp.weights[-1] == exact_mms(inst, 0)


@given(instances(max_vertices=9, agents=(2, 3), homogeneous=True))
def test_two_edge_heavy_bundle_gives_half_mms(inst):
    w = inst.profiles[0]
    gp = greedy_partition(max_weight_matching(inst.graph, w).matching, w, inst.n)
    if len(gp.bundles[0]) >= 2:
        assert 2 * gp.weights[-1] >= exact_mms(inst, 0)


@given(instances(max_vertices=9, agents=(2, 3), homogeneous=True, weight=at_least_one))
def test_rounding_keeps_half_mms(inst):
    assert 2 * exact_mms(round_down_pow2(inst), 0) >= exact_mms(inst, 0)


@given(instances(max_vertices=9, agents=(2, 3), homogeneous=True, weight=at_least_one))
def test_alg1_guarantee_and_trace(inst):
    alloc, trace = alg1_mms_homogeneous(inst)
    assert alloc.is_complete
    assert 8 * _min_utility(inst, alloc) >= exact_mms(inst, 0)
    caps = [s.cap for s in trace.steps[1:]]
    assert all(a > b for a, b in zip(caps, caps[1:]))
    mms = [exact_mms(inst.with_profiles([WeightProfile(s.weights)] * inst.n), 0) for s in trace.steps]
    for old, new in zip(mms, mms[1:]):
        assert new == old or 2 * new > old
    assert ef1_graph(inst, alloc).is_acyclic()


@given(instances(max_vertices=9, agents=(2,), homogeneous=True))
def test_alg2_guarantee_and_trace(inst):
    alloc, trace = alg2_maxmin_two(inst)
    mms = exact_mms(inst, 0)
    assert alloc.is_complete
    assert 3 * _min_utility(inst, alloc) >= 2 * mms
    assert 2 * trace.best_within(2) >= mms
    best = [s.best for s in trace.steps]
    assert best == sorted(best)
    assert all(s.deleted is not None for s in trace.steps[1:])
    assert len(trace.steps) <= inst.graph.edge_count + 1
