import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize_scalar

from minorkit.connectivity import vertex_connectivity
from minorkit.extremal import (
    ExtremalClassParams,
    alpha_objective,
    certify_minimal,
    compute_alpha,
    extract_minor_minimal,
    in_class,
    log_shrink_check,
)
from minorkit.generators import complete, gnp, path
from minorkit.graph import Graph, MinorOp, apply_minor_op


def test_params_validation_and_membership():
    with pytest.raises(ValueError):
        ExtremalClassParams(1.0, 0.1)
    with pytest.raises(ValueError):
        ExtremalClassParams(4, 3)
    with pytest.raises(ValueError):
        ExtremalClassParams(4, -1)
    P = ExtremalClassParams(3, 1)
    assert P.edge_threshold(10) == 27
    assert in_class(complete(8), P)  # 28 > 24 - 3
    assert not in_class(path(20), P)
    assert not in_class(complete(2), P)  # |G| < m


def test_certificate_on_complete_graph():
    # K6 in E(3, 1.2): 15 > 18 - 3.6, while K5 (10 <= 11.4) and K6 - e (14 <= 14.4) are not
    P = ExtremalClassParams(3, 1.2)
    assert in_class(complete(6), P)
    assert not in_class(complete(5), P)
    assert not in_class(Graph(6, list(complete(6).edges())[1:]), P)
    cert = certify_minimal(complete(6), P)
    assert (cert.n, cert.e, cert.min_degree, cert.connectivity, cert.min_edge_triangles) == (6, 15, 5, 5, 4)
    assert cert.passed
    assert all(type(v) is bool for v in cert.checks.values())
    assert cert.to_dict()["passed"] is True


def test_certificate_reports_failures():
    cert = certify_minimal(path(6), ExtremalClassParams(3, 1))
    assert not cert.passed
    assert cert.checks["triangles"] is False


def _replay(G, ops):
    for op in ops:
        G, _ = apply_minor_op(G, op)
    return G


def _single_step_minimal(G, P):
    # independent brute force: every one-step minor leaves the class
    for v in range(G.n):
        if in_class(apply_minor_op(G, MinorOp("delete_vertex", v))[0], P):
            return False
    for u, v in G.edges():
        for kind in ("delete_edge", "contract_edge"):
            if in_class(apply_minor_op(G, MinorOp(kind, u, v))[0], P):
                return False
    return True


@given(st.integers(20, 45), st.floats(0.3, 0.8), st.integers(0, 10**6), st.floats(2.5, 6), st.floats(0.2, 0.5))
def test_extraction_properties(n, p, seed, m, kfrac):
    G = gnp(n, p, seed)
    P = ExtremalClassParams(m, kfrac * m)
    if not in_class(G, P):
        with pytest.raises(ValueError):
            extract_minor_minimal(G, P)
        return
    ext = extract_minor_minimal(G, P)
    H = ext.graph
    assert in_class(H, P)
    assert _replay(G, ext.ops) == H
    assert _single_step_minimal(H, P)
    # origin sets: disjoint, connected in G, and every edge of H is witnessed in G
    seen = set()
    for b in ext.origin:
        assert b and not (b & seen) and G.is_connected(b)
        seen |= b
    for u, v in H.edges():
        assert any(G.neighbors(x) & ext.origin[v] for x in ext.origin[u])
    c = ext.certificate
    assert c.checks["order"] and c.checks["edges"] and c.checks["connectivity"] and c.checks["triangles"]
    assert c.connectivity == vertex_connectivity(H)
    if m * P.k > 1:
        # delta <= 2e/n <= 2m - (2mk - 2)/n, so the upper bound holds strictly here
        assert c.passed


def test_extraction_from_clique_is_clique():
    ext = extract_minor_minimal(complete(100), ExtremalClassParams(2.4671823037355014, 0.12335911518677507))
    assert ext.graph == complete(6)


def test_alpha_matches_paper_value():
    t0 = time.perf_counter()
    res = compute_alpha()
    assert time.perf_counter() - t0 < 1.0
    assert abs(res.alpha - 0.319) <= 1e-3
    assert abs(res.p_star - 0.715) <= 5e-3


def test_alpha_against_scipy_and_grid():
    res = compute_alpha()
    ref = minimize_scalar(lambda p: -alpha_objective(p), bounds=(1e-6, 1 - 1e-6), method="bounded",
                          options={"xatol": 1e-10})
    assert math.isclose(res.p_star, ref.x, abs_tol=1e-6)
    assert math.isclose(res.alpha, -ref.fun, rel_tol=1e-12)
    grid = np.linspace(1e-4, 1 - 1e-4, 200001)
    vals = (grid / 2) / np.sqrt(-np.log1p(-grid))
    assert res.alpha >= vals.max() - 1e-12
    # stationarity: d/dp log f = 1/p - 1/(2 (1-p) L) with L = -log(1-p)
    p = res.p_star
    assert abs(1 / p - 1 / (2 * (1 - p) * -math.log1p(-p))) < 1e-6


def test_alpha_bracket_checks():
    narrow, full = compute_alpha(bracket=(0.3, 0.99)), compute_alpha()
    assert narrow.alpha == pytest.approx(full.alpha, abs=1e-13)
    assert narrow.p_star == pytest.approx(full.p_star, abs=1e-6)
    with pytest.raises(ValueError):
        compute_alpha(bracket=(0.5, 0.4))
    with pytest.raises(ValueError):
        compute_alpha(tolerance=0)
    with pytest.raises(ArithmeticError):
        compute_alpha(bracket=(0.01, 0.2))  # maximiser outside the bracket


@pytest.mark.parametrize("x, eps, lhs", [(0.4, 0.1, 0.8698), (0.49, 0.5, None)])
def test_log_shrink_examples(x, eps, lhs):
    assert log_shrink_check(x, eps)
    if lhs is not None:
        assert math.sqrt(math.log(x + eps) / math.log(x)) == pytest.approx(lhs, abs=1e-4)


def test_log_shrink_domain():
    with pytest.raises(ValueError):
        log_shrink_check(0.5, 0.6)
    with pytest.raises(ValueError):
        log_shrink_check(0.95, 0.1)
    with pytest.raises(ValueError):
        log_shrink_check(0.0, 0.1)


@given(st.floats(0.01, 0.5), st.data())
def test_log_shrink_holds_everywhere(eps, data):
    x = data.draw(st.floats(1e-6, 1 - eps - 1e-9))
    assert log_shrink_check(x, eps)
