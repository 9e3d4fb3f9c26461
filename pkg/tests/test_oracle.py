import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from minorkit.generators import complete, complete_bipartite, cycle, gnp, hypercube, path, petersen
from minorkit.graph import Graph
from minorkit.oracle import (
    MODEL_SCHEMA,
    BudgetExceeded,
    MinorModel,
    Violation,
    dumps_model,
    has_minor_exact,
    model_from_dict,
    model_to_dict,
    verify_model,
)

from .conftest import graphs, to_nx


def brute_force_minor(G: Graph, H: Graph, roots=None) -> bool:
    """Try every map V(G) -> V(H) or unused; independent of the search in the package."""
    t = H.n
    if t == 0:
        return True
    for labels in itertools.product(range(-1, t), repeat=G.n):
        if roots is not None and any(labels[r] != v for v, r in enumerate(roots)):
            continue
        sets = [[x for x in range(G.n) if labels[x] == v] for v in range(t)]
        if not all(sets):
            continue
        if not all(G.is_connected(s) for s in sets):
            continue
        if all(any(G.has_edge(a, b) for a in sets[v] for b in sets[w]) for v, w in H.edges()):
            return True
    return False


def test_classic_facts():
    P = petersen()
    yes = has_minor_exact(P, complete(5))
    assert yes is not None and verify_model(P, yes) == []
    assert has_minor_exact(P, complete(6)) is None
    tree = Graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert has_minor_exact(tree, complete(3)) is None
    assert has_minor_exact(complete_bipartite(3, 3), complete(4)) is not None
    assert has_minor_exact(hypercube(3), complete(4)) is not None
    assert has_minor_exact(hypercube(3), complete(5)) is None  # planar


def test_empty_target_and_trivial_rejections():
    assert has_minor_exact(path(3), Graph(0)).branch_sets == ()
    assert has_minor_exact(path(3), complete(4)) is None  # too few vertices
    assert has_minor_exact(cycle(5), complete(3), roots=[0, 0, 1]) is None
    with pytest.raises(ValueError):
        has_minor_exact(cycle(5), complete(3), roots=[0, 1])
    with pytest.raises(ValueError):
        has_minor_exact(cycle(5), complete(3), roots=[0, 1, 9])


def test_rooted_minors():
    P3 = path(3)
    m = has_minor_exact(P3, complete(2), roots=[0, 2])
    assert m is not None and verify_model(P3, m) == []
    assert m.roots == (0, 2)
    assert has_minor_exact(Graph(3, [(0, 1)]), complete(2), roots=[0, 2]) is None
    # K4 rooted at the four degree-2 corners of a 2x4 grid needs crossing paths
    grid = nx.convert_node_labels_to_integers(nx.grid_2d_graph(2, 4), ordering="sorted")
    G = Graph(8, grid.edges())
    assert has_minor_exact(G, complete(4), roots=[0, 1, 6, 7]) is None


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        has_minor_exact(petersen(), complete(5), budget=3)
    assert info.value.nodes > 3


@given(graphs(min_n=1, max_n=6), graphs(min_n=1, max_n=4))
def test_agrees_with_brute_force(G, H):
    found = has_minor_exact(G, H)
    assert (found is not None) == brute_force_minor(G, H)
    if found is not None:
        assert verify_model(G, found) == []


@given(graphs(min_n=3, max_n=6), st.data())
def test_rooted_agrees_with_brute_force(G, data):
    H = data.draw(graphs(min_n=1, max_n=3))
    roots = data.draw(st.lists(st.integers(0, G.n - 1), min_size=H.n, max_size=H.n, unique=True))
    found = has_minor_exact(G, H, roots)
    assert (found is not None) == brute_force_minor(G, H, roots)


@given(graphs(min_n=1, max_n=12, p=0.3))
def test_triangle_minor_iff_cycle(G):
    has_cycle = bool(nx.cycle_basis(to_nx(G)))
    assert (has_minor_exact(G, complete(3)) is not None) == has_cycle


def test_verify_model_reports_each_violation():
    G = path(5)
    H = complete(2)
    assert verify_model(G, MinorModel(H, [{0}, set()])) == [Violation("empty_set", (1,)), Violation("missing_edge", (0, 1))]
    assert Violation("overlap", (0, 1, 1)) in verify_model(G, MinorModel(H, [{0, 1}, {1, 2}]))
    assert Violation("disconnected_branch", (0, (0, 2))) in verify_model(G, MinorModel(H, [{0, 2}, {1}]))
    assert verify_model(G, MinorModel(H, [{0}, {2}])) == [Violation("missing_edge", (0, 1))]
    assert verify_model(G, MinorModel(H, [{0}, {1}], roots=[0, 4])) == [Violation("root_outside", (1, 4))]
    assert str(Violation("overlap", (0, 1, 1))) == "overlap: (0, 1, 1)"
    with pytest.raises(ValueError):
        verify_model(G, MinorModel(H, [{0}, {9}]))
    with pytest.raises(ValueError):
        verify_model(G, MinorModel(H, [{0}, {1}], roots=[0, 9]))


def test_model_constructor_validation():
    with pytest.raises(ValueError):
        MinorModel(complete(3), [{0}, {1}])
    with pytest.raises(ValueError):
        MinorModel(complete(2), [{0}, {1}], roots=[0])


def test_model_serialisation_roundtrip():
    P = petersen()
    m = has_minor_exact(P, complete(5))
    doc = model_to_dict(m)
    assert doc["schema"] == MODEL_SCHEMA
    back = model_from_dict(json.loads(dumps_model(m)))
    assert back.branch_sets == m.branch_sets and back.target == m.target and back.roots is None
    rooted = MinorModel(complete(2), [{0}, {1}], roots=[0, 1])
    assert model_from_dict(rooted.to_dict()).roots == (0, 1)
    with pytest.raises(ValueError):
        model_from_dict({**doc, "schema": "other/9"})


def test_dense_random_host_contains_small_cliques():
    G = gnp(20, 0.6, 1)
    m = has_minor_exact(G, complete(5))
    assert m is not None and verify_model(G, m) == []


def _subdivide_and_hang(G: Graph, data) -> Graph:
    edges = set(G.edges())
    n = G.n
    for e in sorted(edges):
        if data.draw(st.booleans()):
            edges.discard(e)
            edges |= {(e[0], n), (e[1], n)}
            n += 1
    for _ in range(data.draw(st.integers(0, 3))):
        edges.add((data.draw(st.integers(0, n - 1)), n))
        n += 1
    return Graph(n, edges)


@given(graphs(min_n=4, max_n=8, p=0.6), st.sampled_from(["K4", "K5", "K33"]), st.data())
def test_subdividing_and_pendants_preserve_answer(G, name, data):
    # both operations are topological for targets of minimum degree 3
    H = {"K4": complete(4), "K5": complete(5), "K33": complete_bipartite(3, 3)}[name]
    G2 = _subdivide_and_hang(G, data)
    a, b = has_minor_exact(G, H), has_minor_exact(G2, H)
    assert (a is None) == (b is None)
    if b is not None:
        assert not verify_model(G2, b)


def test_suppressed_cycle_has_no_k4():
    G = cycle(40)
    assert has_minor_exact(G, complete(4)) is None
    assert has_minor_exact(G.with_edges([(0, 20), (10, 30)]), complete(4)) is not None
