import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphfair.core import Graph, Instance, WeightProfile

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

halves = st.integers(min_value=0, max_value=32).map(lambda k: Fraction(k, 2))


@st.composite
def graphs(draw, max_vertices=8):
    nv = draw(st.integers(min_value=0, max_value=max_vertices))
    pairs = [(u, v) for u in range(nv) for v in range(u + 1, nv)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(nv, edges)


@st.composite
def instances(draw, max_vertices=7, agents=(1, 2, 3), homogeneous=False, binary=False, weight=halves):
    g = draw(graphs(max_vertices))
    n = draw(st.sampled_from(agents))
    w = st.sampled_from([Fraction(0), Fraction(1)]) if binary else weight
    row = lambda: WeightProfile(draw(st.lists(w, min_size=g.edge_count, max_size=g.edge_count)))
    if homogeneous:
        return Instance.homogeneous_instance(g, n, row())
    return Instance(g, n, tuple(row() for _ in range(n)))


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
