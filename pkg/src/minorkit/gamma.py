"""The vertex-weight program gamma(H).

Minimise ``(1/t) * sum(w)`` over non-negative weightings ``w`` of the ``t``
vertices of ``H`` subject to ``sum_{uv in E(H)} t**(-w(u) w(v)) <= t``.

The weights are written ``w = c * u`` with ``u`` on the simplex
``{u >= 0, sum(u) = t}``.  For a fixed shape ``u`` the constraint is
monotone in ``c``, so the smallest feasible scale ``c(u)`` is a 1-D root and
the objective is exactly ``c(u)``.  The outer problem is solved by projected
gradient on ``u``; the constraint is restored exactly at every iterate, so
every visited point is feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = ["WeightVector", "compute_gamma", "constraint_sum", "project_to_simplex", "tau_of"]


@dataclass
class WeightVector:
    w: np.ndarray
    objective: float
    slack: float
    tau: float

    @property
    def feasible(self) -> bool:
        return bool(self.slack >= 0 and (self.w >= 0).all())

    def to_dict(self) -> dict:
        return {
            "w": [float(x) for x in self.w],
            "objective": float(self.objective),
            "slack": float(self.slack),
            "tau": float(self.tau),
            "feasible": self.feasible,
        }


def tau_of(H: Graph) -> float:
    """``tau`` with ``e(H) = t**(1 + tau)``."""
    if H.n < 2 or H.num_edges == 0:
        raise ValueError("tau needs t >= 2 and at least one edge")
    return math.log(H.num_edges) / math.log(H.n) - 1


def constraint_sum(H: Graph, w) -> float:
    """``sum over edges of t**(-w(u) w(v))``, evaluated directly."""
    w = np.asarray(w, dtype=float)
    E = H.edge_array()
    if len(E) == 0:
        return 0.0
    return float(np.exp(-math.log(H.n) * w[E[:, 0]] * w[E[:, 1]]).sum())


def project_to_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum(x) = total}`` (sort-based)."""
    srt = np.sort(v)[::-1]
    css = np.cumsum(srt) - total
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(srt - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


class _Program:
    def __init__(self, H: Graph):
        self.t = H.n
        self.L = math.log(H.n)
        E = H.edge_array()
        self.a, self.b = E[:, 0], E[:, 1]

    def scale_sq(self, u: np.ndarray) -> float:
        """Smallest ``s = c**2`` with ``sum exp(-L s u_a u_b) <= t``; ``inf`` if none."""
        prod = u[self.a] * u[self.b]
        if np.count_nonzero(prod <= 0) >= self.t:
            return math.inf
        L, logt = self.L, self.L
        s = 0.0
        # Newton on the convex decreasing h(s) = log sum exp(-L s prod) - log t,
        # started left of the root, increases monotonically to it
        for _ in range(200):
            x = -L * s * prod
            mx = x.max()
            ex = np.exp(x - mx)
            tot = ex.sum()
            h = mx + math.log(tot) - logt
            if h <= 1e-13:
                break
            dh = -L * float((prod * ex).sum()) / tot
            step = -h / dh
            s += step
            if step <= 1e-15 * max(s, 1.0):
                break
        while np.exp(-L * s * prod).sum() > self.t:
            s = s * (1 + 1e-12) + 1e-15
        return s

    def gradient(self, u: np.ndarray, s: float) -> np.ndarray:
        prod = u[self.a] * u[self.b]
        ex = np.exp(-self.L * s * prod)
        A = float((prod * ex).sum())
        g = np.zeros(self.t)
        np.add.at(g, self.a, u[self.b] * ex)
        np.add.at(g, self.b, u[self.a] * ex)
        return -s * g / A

    def descend(self, u: np.ndarray, tolerance: float, max_iter: int) -> tuple[np.ndarray, float]:
        t = self.t
        u = project_to_simplex(u, t)
        s = self.scale_sq(u)
        if not math.isfinite(s):
            return u, s
        step = 1.0
        for _ in range(max_iter):
            g = self.gradient(u, s)
            improved = False
            while step > 1e-12:
                cand = project_to_simplex(u - step * g, t)
                sc = self.scale_sq(cand)
                decrease = float(g @ (u - cand))
                if sc <= s - 1e-4 * decrease and sc < s:
                    improved = True
                    break
                step /= 2
            if not improved:
                break
            rel = (math.sqrt(s) - math.sqrt(sc)) / max(math.sqrt(s), 1e-300)
            u, s = cand, sc
            step *= 2
            if rel < tolerance * 1e-3:
                break
        return u, s


def _finish(H: Graph, w: np.ndarray, tau: float) -> WeightVector:
    slack = H.n - constraint_sum(H, w)
    bump = 0
    while slack < 0:
        # rounding only; a few ulps of extra scale restore feasibility
        bump += 1
        w = w * (1 + 1e-12 * 4**bump)
        slack = H.n - constraint_sum(H, w)
    return WeightVector(w, float(w.sum() / H.n), float(slack), tau)


def compute_gamma(H: Graph, tolerance: float = 1e-6, max_iter: int = 2000) -> WeightVector:
    """Best feasible weighting found from the constant and degree-proportional starts.

    The constant start is the weighting ``w = sqrt(tau)``, so the objective
    never exceeds ``sqrt(tau)`` beyond rounding.  Graphs with ``e(H) <= t``
    are feasible at ``w = 0``.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    t = H.n
    if t < 2:
        raise ValueError("gamma needs at least two vertices")
    if H.num_edges == 0:
        return WeightVector(np.zeros(t), 0.0, float(t), -math.inf)
    tau = tau_of(H)
    if H.num_edges <= t:
        return _finish(H, np.zeros(t), tau)

    prog = _Program(H)
    deg = H.degrees().astype(float)
    starts = [np.ones(t), deg * t / deg.sum()]
    best_u, best_s = None, math.inf
    for u0 in starts:
        u, s = prog.descend(u0, tolerance, max_iter)
        if s < best_s:
            best_u, best_s = u, s
    return _finish(H, math.sqrt(best_s) * best_u, tau)
