import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minorkit.gamma import WeightVector, compute_gamma, constraint_sum, project_to_simplex, tau_of
from minorkit.generators import complete, complete_bipartite, cycle, gnp, random_avg_degree
from minorkit.graph import Graph


def side_constant_grid(t: int, beta: float, steps: int = 2001) -> float:
    """Best objective over weightings equal to a on one side and b on the other."""
    s = round(beta * t)
    L = math.log(t)
    grid = np.linspace(0, 3, steps)
    a, b = np.meshgrid(grid, grid, indexing="ij")
    lhs = s * (t - s) * np.exp(-L * a * b)
    obj = np.where(lhs <= t, (s * a + (t - s) * b) / t, np.inf)
    # refine around the coarse optimum
    i, j = np.unravel_index(np.argmin(obj), obj.shape)
    fa = np.linspace(max(grid[i] - 0.01, 0), grid[i] + 0.01, 801)
    fb = np.linspace(max(grid[j] - 0.01, 0), grid[j] + 0.01, 801)
    a, b = np.meshgrid(fa, fb, indexing="ij")
    lhs = s * (t - s) * np.exp(-L * a * b)
    fine = np.where(lhs <= t, (s * a + (t - s) * b) / t, np.inf)
    return float(min(obj.min(), fine.min()))


def test_edgeless_and_sparse_graphs():
    wv = compute_gamma(Graph(10))
    assert wv.objective == 0 and wv.feasible and wv.tau == -math.inf
    assert not wv.w.any()
    wv = compute_gamma(cycle(10))  # e = t: w = 0 already satisfies the constraint
    assert wv.objective == 0 and wv.slack == 0 and wv.feasible


def test_argument_checks():
    with pytest.raises(ValueError):
        compute_gamma(Graph(1))
    with pytest.raises(ValueError):
        compute_gamma(complete(4), tolerance=0)
    with pytest.raises(ValueError):
        tau_of(Graph(5))


def test_tau_definition():
    H = complete(10)
    assert H.n ** (1 + tau_of(H)) == pytest.approx(H.num_edges)


def test_constraint_sum_direct():
    H = complete_bipartite(2, 3)
    w = np.arange(5) / 4
    expected = sum(5 ** (-w[u] * w[v]) for u, v in H.edges())
    assert constraint_sum(H, w) == pytest.approx(expected, rel=1e-14)
    assert constraint_sum(Graph(3), w[:3]) == 0.0


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=20), st.floats(0.1, 10))
def test_simplex_projection(v, total):
    v = np.array(v)
    x = project_to_simplex(v, total)
    assert (x >= 0).all()
    assert x.sum() == pytest.approx(total, rel=1e-9)
    # no point of the simplex is closer to v
    rng = np.random.default_rng(len(v))
    for _ in range(20):
        y = rng.dirichlet(np.ones(len(v))) * total
        assert np.linalg.norm(v - x) <= np.linalg.norm(v - y) + 1e-9


def test_complete_graph_uses_constant_weighting():
    H = complete(12)
    wv = compute_gamma(H)
    assert wv.feasible
    assert wv.objective == pytest.approx(math.sqrt(tau_of(H)), abs=1e-6)
    assert np.ptp(wv.w) < 1e-6


@pytest.mark.parametrize("beta", [0.1, 0.25, 0.5])
def test_complete_bipartite_matches_grid_oracle(beta):
    t = 100
    s = round(beta * t)
    H = complete_bipartite(s, t - s)
    wv = compute_gamma(H)
    assert wv.feasible
    oracle = side_constant_grid(t, beta)
    assert abs(wv.objective - oracle) <= 0.01 * oracle


def test_complete_bipartite_closed_form():
    # with sides a, b constant: ab = 1 + log_t(beta(1-beta)) at the optimum
    for t, frozen in [(100, 0.836044), (400, 0.876711)]:
        wv = compute_gamma(complete_bipartite(t // 2, t // 2))
        closed = 2 * math.sqrt(0.25 * (1 + math.log(0.25) / math.log(t)))
        assert wv.objective == pytest.approx(closed, abs=1e-8)
        assert wv.objective == pytest.approx(frozen, abs=1e-6)


def test_balanced_trend_towards_asymptote():
    vals = [compute_gamma(complete_bipartite(t // 2, t // 2)).objective for t in (100, 400, 1600)]
    assert vals[0] < vals[1] < vals[2] < 1.0


@given(st.integers(6, 40), st.data())
def test_random_targets_feasible_and_below_sqrt_tau(t, data):
    d = data.draw(st.floats(2.5, t - 1))
    H = random_avg_degree(t, d, data.draw(st.integers(0, 10**6)))
    wv = compute_gamma(H)
    assert isinstance(wv, WeightVector)
    assert wv.feasible
    assert constraint_sum(H, wv.w) <= t
    assert wv.objective <= math.sqrt(tau_of(H)) + 1e-3


def test_to_dict():
    doc = compute_gamma(gnp(20, 0.5, 0)).to_dict()
    assert set(doc) == {"w", "objective", "slack", "tau", "feasible"}
    assert doc["feasible"] is True and len(doc["w"]) == 20
