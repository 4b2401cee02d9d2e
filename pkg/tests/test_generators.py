from fractions import Fraction

import pytest

from graphfair.core import Allocation, dumps_instance, social_welfare, utility
from graphfair.ef1 import is_ef1
from graphfair.generators import (
    BinaryTightLayout,
    FamilySpec,
    gen_binary_tight,
    gen_crossing,
    gen_disjoint_edges,
    gen_heavy_path,
    gen_homog_tight,
    gen_random,
    gen_two_agent_tight,
)
from graphfair.matching import max_weight_matching
from graphfair.mms import greedy_partition
from graphfair.oracle import (
    AllocationEnumerator,
    exact_max_ef1_welfare,
    exact_mms,
    max_social_welfare_exact,
    max_social_welfare_matching,
)


def test_crossing():
    inst = gen_crossing()
    assert [exact_mms(inst, i) for i in range(2)] == [1, 1]
    worst = [min(utility(inst, i, b) for i, b in enumerate(x.bundles)) for x in AllocationEnumerator(2, 4)]
    assert len(worst) == 16 and max(worst) == 0
    with pytest.raises(ValueError):
        gen_crossing(3)


def test_heavy_path():
    inst = gen_heavy_path(8)
    assert exact_mms(inst, 0) == 1
    res = max_weight_matching(inst.graph, inst.profiles[0])
    assert res.weight == 8
    assert greedy_partition(res.matching, inst.profiles[0], 2).weights == (8, 0)
    with pytest.raises(ValueError):
        gen_heavy_path(2)


def test_disjoint_edges():
    inst = gen_disjoint_edges(3, Fraction(1, 10))
    assert max_social_welfare_matching(inst) == 3
    assert exact_max_ef1_welfare(inst)[0] == Fraction(6, 5)
    assert max_social_welfare_matching(gen_disjoint_edges(1)) == 1
    with pytest.raises(ValueError):
        gen_disjoint_edges(3, Fraction(2, 3))


def test_binary_tight():
    assert max_social_welfare_matching(gen_binary_tight(5)) == 14
    inst = gen_binary_tight(10)
    assert inst.graph.vertex_count == 59 and inst.is_binary
    first, second = BinaryTightLayout.build(10).worst_case_bundles()
    worst = Allocation((first, second))
    assert [utility(inst, 0, first), utility(inst, 1, second)] == [2, 11]
    assert social_welfare(inst, worst) == 13 and is_ef1(inst, worst)
    with pytest.raises(ValueError):
        gen_binary_tight(4)


def test_two_agent_tight():
    inst = gen_two_agent_tight(Fraction(1, 100))
    assert max_social_welfare_exact(inst)[0] == 3
    assert exact_max_ef1_welfare(inst)[0] == Fraction(51, 50)
    for x in AllocationEnumerator(2, 6):
        if utility(inst, 0, x.bundles[0]) >= 2:
            assert utility(inst, 1, x.bundles[1]) == 0
    with pytest.raises(ValueError):
        gen_two_agent_tight(Fraction(1, 2))


def test_homog_tight():
    eps = Fraction(1, 9)
    inst = gen_homog_tight(3, eps)
    w = inst.profiles[0]
    res = max_weight_matching(inst.graph, w)
    assert res.weight == 16 + 6 * eps * eps
    gp = greedy_partition(res.matching, w, 3)
    assert gp.weights == (6, 6, 4 + 6 * eps * eps)
    assert not is_ef1(inst, Allocation(tuple(gp.vertex_bundles(inst.graph)), res.unmatched))
    assert gen_homog_tight(2).n == 2
    with pytest.raises(ValueError):
        gen_homog_tight(3, Fraction(1, 8))


def test_random_family():
    empty = gen_random(2, 5, edge_prob=0, seed=1)
    assert empty.graph.edge_count == 0 and max_social_welfare_matching(empty) == 0
    tri = gen_random(2, 3, edge_prob=1, seed=1)
    assert tri.graph.edges == ((0, 1), (0, 2), (1, 2))
    assert dumps_instance(gen_random(3, 8, seed=42)) == dumps_instance(gen_random(3, 8, seed=42))
    assert gen_random(2, 8, binary=True, seed=3).is_binary
    h = gen_random(3, 8, homogeneous=True, seed=3)
    assert h.homogeneous and h.identical_profiles
    assert all(1 <= w <= 16 for p in gen_random(2, 8, seed=5).profiles for w in p)
    with pytest.raises(ValueError):
        gen_random(2, 5, edge_prob=1.5)


def test_family_spec():
    spec = FamilySpec("random", {"n": 2, "vertices": 6, "seed": 9})
    assert dumps_instance(spec.build()) == dumps_instance(spec.build())
    assert FamilySpec("heavy-path").build().n == 2
    with pytest.raises(ValueError):
        FamilySpec("nope")
