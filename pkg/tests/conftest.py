import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from rigidlab.hypergraph import HyperEdge, WeightedHypergraph  # noqa: E402
from rigidlab.instances import fixture  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fig1():
    return fixture("fig1").h


@pytest.fixture(scope="session")
def fig2():
    return fixture("fig2").h


@pytest.fixture(scope="session")
def example2():
    return fixture("example2").h


@st.composite
def hypergraphs(draw, max_d=4, max_n=5, max_edges=7):
    """Valid weighted hypergraphs; vertices named v1..vn."""
    d = draw(st.integers(2, max_d))
    n = draw(st.integers(1, max_n))
    names = [f"v{i + 1}" for i in range(n)]
    edges = []
    for _ in range(draw(st.integers(0, max_edges))):
        s = draw(st.integers(1, min(d - 1, n)))
        vs = draw(st.lists(st.sampled_from(range(n)), min_size=s, max_size=s, unique=True))
        m = draw(st.integers(1, s))
        edges.append(HyperEdge([names[v] for v in sorted(vs)], m))
    return WeightedHypergraph(d, names, edges)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
