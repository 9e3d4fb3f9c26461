import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minorkit.connectivity import vertex_connectivity
from minorkit.failure import EmbeddingFailed
from minorkit.generators import complete, cycle, glued_cliques, gnp, random_avg_degree
from minorkit.graph import Graph
from minorkit.oracle import MinorModel, verify_model
from minorkit.sparse import (
    N_PIECES,
    BipartiteInstance,
    DenseCoreFamily,
    SparseConfig,
    bipartite_contraction_minor,
    embed_sparse,
    find_dense_cores,
    partition_H,
    path_plan_problems,
    route_paths,
    run_sparse,
)


def bipartite_host(seed, a=60, b=12, k=8):
    rng = np.random.default_rng(seed)
    edges = {(x, a + int(y)) for x in range(a) for y in rng.choice(b, size=k, replace=False)}
    return Graph(a + b, edges), list(range(a)), list(range(a, a + b))


@pytest.fixture(scope="module")
def glued_run():
    G = glued_cliques(16, 60, 2, 0)
    return G, run_sparse(G, cycle(5), 60.0, SparseConfig(seed=0))


def test_config_validation():
    with pytest.raises(ValueError):
        SparseConfig(mode="quick")
    with pytest.raises(ValueError):
        SparseConfig(q=0.3)
    with pytest.raises(ValueError):
        SparseConfig(attempts=0)
    with pytest.raises(ValueError):
        SparseConfig(connectivity_multiple=2)
    assert SparseConfig(mode="paper_faithful").kappa_multiple == 100
    assert SparseConfig().kappa_multiple == 4


def test_contraction_argument_checks():
    G, A, B = bipartite_host(0)
    with pytest.raises(ValueError):
        bipartite_contraction_minor(G, A, A[:3], 10, 0.1)
    with pytest.raises(ValueError):
        bipartite_contraction_minor(G, A, B, 10, 0.25)
    with pytest.raises(ValueError):
        bipartite_contraction_minor(G, A, B, 60, 0.1, mode="paper_faithful")  # 8 < 60/6


@pytest.mark.parametrize("seed", range(4))
def test_contraction_edge_accounting_and_lift(seed):
    G, A, B = bipartite_host(seed)
    out = bipartite_contraction_minor(G, A, B, 48, 0.2)
    assert out.kind == "dense_core"
    assert out.q_a <= 0.2
    # replay the merges independently and recount the edges of G*
    star = {b: set() for b in B}
    total = 0
    for step in out.steps:
        if step.get("stopped") or "b" not in step:
            continue
        N = sorted(G.neighbors(step["a"]) & set(B))
        b = step["b"]
        inside = len(star[b] & set(N))
        assert inside == min(len(star[x] & set(N)) for x in N)
        before = len(star[b])
        for y in N:
            if y != b:
                star[b].add(y)
                star[y].add(b)
        assert len(star[b]) - before == step["added"]
        assert step["added"] >= step["q_a"] * (len(N) - 1) - 1e-9
        total += step["added"]
    assert total == out.added_edges <= out.pair_cap
    # the dense core is a minor of G: anything embedded there lifts
    H = complete(4)
    from minorkit.oracle import has_minor_exact

    sub = has_minor_exact(out.core, H)
    assert sub is not None
    assert verify_model(G, MinorModel(H, out.lift(sub))) == []


def test_contraction_exhausts_on_tiny_neighbourhoods():
    # each a sees two B vertices in a long path pattern; pairs fill slowly
    a, b = 5, 30
    edges = [(i, a + 2 * i) for i in range(a)] + [(i, a + 2 * i + 1) for i in range(a)]
    G = Graph(a + b, edges)
    out = bipartite_contraction_minor(G, range(a), range(a, a + b), 10, 0.1)
    assert out.kind == "exhausted"
    assert out.added_edges == a and out.pair_cap == b * (b - 1) // 2


@given(st.integers(1, 50), st.data())
def test_partition_H_covers_every_edge(t, data):
    d = data.draw(st.floats(0, max(t - 1, 0)))
    H = random_avg_degree(t, d, data.draw(st.integers(0, 1000)))
    plan = partition_H(H, data.draw(st.integers(0, 1000)))
    flat = sorted(v for p in plan.parts for v in p)
    assert flat == list(range(t))
    assert max(map(len, plan.parts)) - min(map(len, plan.parts)) <= 1
    assert len(plan.vertices) == N_PIECES == len(plan.padded)
    for k, (i, j) in enumerate(plan.pairs):
        assert plan.vertices[k] == sorted(plan.parts[i] + plan.parts[j])
        sub = plan.piece_graph(H, k)
        assert set(sub.edges()) <= set(plan.padded[k].edges())
        if plan.padded[k].n and d > 0:
            assert 2 * plan.padded[k].num_edges / plan.padded[k].n <= max(4 * plan.target_degree, 2 * sub.num_edges / sub.n)
    covered = {(v, w) for k in range(N_PIECES) for v, w in combinations(plan.vertices[k], 2)}
    assert all((v, w) in covered for v, w in H.edges())
    for v in range(t):
        assert len(plan.pieces_of(v)) == 5


def test_partition_H_rejects_empty():
    with pytest.raises(ValueError):
        partition_H(Graph(0), 0)


def test_cores_and_paths_on_glued_cliques():
    G = glued_cliques(16, 60, 2, 0)
    cores = find_dense_cores(G, 60.0, SparseConfig())
    assert isinstance(cores, DenseCoreFamily)
    assert len(cores.T) == 16
    all_T = [set(T) for T in cores.T]
    for i, j in combinations(range(16), 2):
        assert not (all_T[i] & all_T[j])
    for st_, T in zip(cores.stats, cores.T):
        assert st_["refinement_rounds"] <= 3
        sub = G.induced_subgraph(T)[0]
        assert vertex_connectivity(sub, cutoff=2) >= math.ceil(60 / 40)
    plan = partition_H(cycle(5), 1)
    pp = route_paths(G, cores, plan, SparseConfig(), seed=2)
    assert path_plan_problems(G, cores, plan, pp) == []
    assert pp.menger_paths == 25
    # the independent checker notices tampering
    key = next(iter(pp.paths))
    bad = dict(pp.paths)
    bad[key] = bad[key][:1] + bad[key][2:]
    pp.paths = bad
    assert path_plan_problems(G, cores, plan, pp)


def test_run_sparse_trace(glued_run):
    G, run = glued_run
    assert verify_model(G, run.model) == []
    tr = run.trace
    assert tr["branch"] == "cores"
    assert all(c["refinement_rounds"] <= 3 for c in tr["cores"])
    assert tr["paths"]["max_core_usage"] <= 480
    assert all(p["X"] <= 2400 * 5 for p in tr["pieces"])
    assert tr["hypotheses"]["kappa"] >= 20


def test_embed_sparse_deterministic(glued_run):
    G, run = glued_run
    again = embed_sparse(G, cycle(5), 60.0, SparseConfig(seed=0))
    assert again.branch_sets == run.model.branch_sets


def test_sparse_failures():
    with pytest.raises(EmbeddingFailed) as info:
        embed_sparse(cycle(40), complete(3), 3.0)
    assert info.value.report.stage == "sparse/precondition"
    assert "kappa" in info.value.report.violated[0]
    G = gnp(40, 0.5, 0)
    run = run_sparse(G, complete(3), 5.0, SparseConfig(check_connectivity=False))
    assert run.trace["branch"] in ("cores", "bipartite")
    assert verify_model(G, run.model) == []
    with pytest.raises(EmbeddingFailed) as info:
        embed_sparse(G, complete(3), 5.0, SparseConfig(mode="paper_faithful"))
    assert any("|G|" in v for v in info.value.report.violated)


def test_bipartite_branch_of_dichotomy():
    G, A, B = bipartite_host(1, a=80, b=14, k=10)
    # every A vertex has degree 10 <= 6m and at least m/6 neighbours in B
    from minorkit.sparse import _embed_via_core

    inst = BipartiteInstance(A, B, 0, 10)
    run = _embed_via_core(G, complete(3), inst, 12.0, SparseConfig(q=0.2), {})
    assert verify_model(G, run.model) == []
