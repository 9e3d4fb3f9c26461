import networkx as nx
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from minorkit.graph import Graph

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=12, p=None):
    """Random simple graphs as a boolean choice per pair."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        seed = draw(st.integers(0, 2**31 - 1))
        import random

        rnd = random.Random(seed)
        mask = [rnd.random() < p for _ in pairs]
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


def to_nx(G: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges())
    return g


@pytest.fixture
def nxconv():
    return to_nx


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
