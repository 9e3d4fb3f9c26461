"""The extremal class E(m, k), minor-minimal extraction, and the constant alpha."""

from __future__ import annotations

import bisect
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .connectivity import minimum_vertex_cut, vertex_connectivity
from .graph import Graph, MinorOp

__all__ = [
    "AlphaResult",
    "ExtremalClassParams",
    "Extraction",
    "MinimalityCertificate",
    "alpha_objective",
    "certify_minimal",
    "compute_alpha",
    "extract_minor_minimal",
    "in_class",
    "log_shrink_check",
]


@dataclass(frozen=True)
class ExtremalClassParams:
    """``E(m, k) = {G : |G| >= m, e(G) > m|G| - mk}`` for reals ``m > 1``, ``0 <= k <= m/2``."""

    m: float
    k: float

    def __post_init__(self):
        if not self.m > 1:
            raise ValueError(f"m must exceed 1, got {self.m}")
        if not 0 <= self.k <= self.m / 2:
            raise ValueError(f"k must lie in [0, m/2], got {self.k}")

    def edge_threshold(self, n: int) -> float:
        return self.m * n - self.m * self.k

    def admits(self, n: int, e: int) -> bool:
        return n >= self.m and e > self.edge_threshold(n)


def in_class(G: Graph, params: ExtremalClassParams) -> bool:
    return params.admits(G.n, G.num_edges)


@dataclass
class MinimalityCertificate:
    """Measured values of the five structural conclusions for a minor-minimal graph."""

    m: float
    k: float
    n: int
    e: int
    min_degree: int
    connectivity: int
    min_edge_triangles: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["passed"] = self.passed
        return doc


def certify_minimal(G: Graph, params: ExtremalClassParams) -> MinimalityCertificate:
    m, k = params.m, params.k
    n, e = G.n, G.num_edges
    delta = int(G.degrees().min()) if n else 0
    kappa = vertex_connectivity(G) if n >= 2 else 0
    tri = min((len(G.neighbors(u) & G.neighbors(v)) for u, v in G.edges()), default=0)
    checks = {
        "order": bool(n >= m + 1),
        "edges": bool(e <= m * n - m * k + 1),
        "min_degree": bool(m < delta < 2 * m),
        "connectivity": bool(kappa > k),
        "triangles": bool(tri > m - 1),
    }
    return MinimalityCertificate(m, k, n, e, delta, kappa, tri, checks)


@dataclass
class Extraction:
    """A minor-minimal member of E(m, k) found inside a host graph.

    ``ops`` replays through :func:`~minorkit.graph.apply_minor_op` from the
    host to ``graph``; ``origin[v]`` is the host branch set that became ``v``.
    """

    graph: Graph
    certificate: MinimalityCertificate
    ops: list[MinorOp]
    origin: list[frozenset[int]]


class _Working:
    """Mutable graph keyed by host labels, emitting ops in compacted ids."""

    def __init__(self, G: Graph):
        self.adj = {v: set(G.neighbors(v)) for v in range(G.n)}
        self.alive = list(range(G.n))
        self.e = G.num_edges
        self.origin = {v: {v} for v in range(G.n)}
        self.ops: list[MinorOp] = []

    @property
    def n(self) -> int:
        return len(self.alive)

    def rank(self, v: int) -> int:
        return bisect.bisect_left(self.alive, v)

    def delete_vertex(self, v: int):
        self.ops.append(MinorOp("delete_vertex", self.rank(v)))
        nv = self.adj.pop(v)
        for w in nv:
            self.adj[w].discard(v)
        self.e -= len(nv)
        self.alive.pop(self.rank(v))
        del self.origin[v]

    def delete_edge(self, u: int, v: int):
        self.ops.append(MinorOp("delete_edge", self.rank(u), self.rank(v)))
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.e -= 1

    def contract(self, u: int, v: int):
        self.ops.append(MinorOp("contract_edge", self.rank(u), self.rank(v)))
        nv = self.adj.pop(v)
        for w in nv:
            self.adj[w].discard(v)
        nv.discard(u)
        self.e -= 1 + len(nv & self.adj[u])
        for w in nv:
            self.adj[u].add(w)
            self.adj[w].add(u)
        self.alive.pop(self.rank(v))
        self.origin[u] |= self.origin.pop(v)

    def delete_first_edges(self, keep_going) -> None:
        """Delete edges in lexicographic order while ``keep_going()`` holds."""
        for u in self.alive:
            for v in sorted(w for w in self.adj[u] if w > u):
                if not keep_going():
                    return
                self.delete_edge(u, v)

    def to_graph(self) -> tuple[Graph, list[frozenset[int]]]:
        index = {v: i for i, v in enumerate(self.alive)}
        adj = [[index[w] for w in self.adj[v]] for v in self.alive]
        return Graph._from_adjacency(adj), [frozenset(self.origin[v]) for v in self.alive]


def _single_step(W: _Working, P: ExtremalClassParams) -> bool:
    """Apply the first admissible single-step minor that stays in the class."""
    n, e = W.n, W.e
    if n - 1 >= P.m:
        bound = P.edge_threshold(n - 1)
        for v in W.alive:
            if e - len(W.adj[v]) > bound:
                W.delete_vertex(v)
                return True
    if e - 1 > P.edge_threshold(n):
        # losing one edge never makes a vertex deletion admissible, so batch them
        W.delete_first_edges(lambda: W.e - 1 > P.edge_threshold(W.n))
        return True
    if n - 1 >= P.m:
        bound = P.edge_threshold(n - 1)
        for u in list(W.alive):
            for v in sorted(w for w in W.adj[u] if w > u):
                common = len(W.adj[u] & W.adj[v])
                if e - 1 - common > bound:
                    W.contract(u, v)
                    return True
    return False


def _cut_step(W: _Working, P: ExtremalClassParams) -> bool:
    """If kappa <= k, pass to the half of a small separation that stays in the class."""
    G, _ = W.to_graph()
    if G.n < 2 or vertex_connectivity(G) > P.k:
        return False
    cut = minimum_vertex_cut(G)
    if cut is None:
        return False
    rest = [v for v in range(G.n) if v not in cut]
    for comp in G.components(rest):
        for keep in (comp | cut, set(range(G.n)) - comp):
            sub = G.induced_subgraph(keep)[0]
            if in_class(sub, P):
                for v in sorted((W.alive[i] for i in range(G.n) if i not in keep), reverse=True):
                    W.delete_vertex(v)
                return True
    return False


def extract_minor_minimal(G: Graph, params: ExtremalClassParams) -> Extraction:
    """Shrink ``G`` to a minor-minimal member of E(m, k).

    Vertex deletions are tried first, then edge deletions, then
    contractions, lowest ids first, rescanning after each success.  When the
    result is single-step minimal but has a vertex cut of size at most
    ``k``, the side of the separation that stays in the class is kept and the
    scan resumes.
    """
    if not in_class(G, params):
        raise ValueError(f"graph with |G|={G.n}, e={G.num_edges} is not in E({params.m}, {params.k})")
    W = _Working(G)
    while True:
        while _single_step(W, params):
            pass
        if not _cut_step(W, params):
            break
    H, origin = W.to_graph()
    assert in_class(H, params)
    return Extraction(H, certify_minimal(H, params), W.ops, origin)


class AlphaResult(NamedTuple):
    alpha: float
    p_star: float


def alpha_objective(p: float) -> float:
    """``(p/2) / sqrt(log(1/(1-p)))`` on ``0 < p < 1``."""
    return (p / 2) / math.sqrt(-math.log1p(-p))


_INVPHI = (math.sqrt(5) - 1) / 2


def compute_alpha(tolerance: float = 1e-9, bracket: tuple[float, float] = (1e-9, 1 - 1e-9)) -> AlphaResult:
    """Golden-section maximisation of :func:`alpha_objective`.

    Unimodality is not assumed: the result must beat both bracket ends and
    its two neighbours at distance 1e-3, and agree with the best point of a
    coarse grid.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = bracket
    if not 0 < lo < hi < 1:
        raise ValueError("bracket must lie inside (0, 1)")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = alpha_objective(c), alpha_objective(d)
    while b - a > tolerance:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = alpha_objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = alpha_objective(d)
    p = (a + b) / 2
    f = alpha_objective(p)
    probes = [lo, hi] + [x for x in (p - 1e-3, p + 1e-3) if lo < x < hi]
    if any(alpha_objective(x) > f for x in probes):
        raise ArithmeticError("golden-section result is not a bracketed maximum")
    grid = [lo + (hi - lo) * i / 1000 for i in range(1, 1000)]
    best = max(grid, key=alpha_objective)
    if abs(best - p) > 2 * (hi - lo) / 1000:
        raise ArithmeticError("objective is not unimodal on the bracket")
    return AlphaResult(f, p)


def log_shrink_check(x: float, eps: float) -> bool:
    """Evaluate ``sqrt(log(x+eps)/log(x)) <= 1 - eps`` for ``eps <= 1/2``, ``0 < x < 1-eps``."""
    if not (0 < eps <= 0.5):
        raise ValueError(f"eps={eps} outside (0, 1/2]")
    if not (0 < x < 1 - eps):
        raise ValueError(f"x={x} outside (0, 1-eps)")
    return math.sqrt(math.log(x + eps) / math.log(x)) <= 1 - eps
