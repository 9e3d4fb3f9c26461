"""Rooted H minors in dense, well-connected hosts.

The embedding is assembled in three stages: put aside a connector ``C`` and
a projector ``P`` (plus the roots ``R``), find an almost-H-compatible
equipartition of ``G - C - P - R``, and then connect each part to its root
and repair the missing H-edges through ``C``.  Every random step is a
bounded retry loop whose output is checked before it is used.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .connectivity import disjoint_short_paths, shortest_path, vertex_connectivity
from .failure import EmbeddingFailed, FailureReport, inequality
from .graph import Graph, graph_stats
from .oracle import MinorModel, verify_model

__all__ = [
    "AlmostCompatibleResult",
    "ConnectorProjector",
    "DenseConfig",
    "Equipartition",
    "almost_compatible_equipartition",
    "balanced_equipartition",
    "branch_set_problems",
    "build_connector_projector",
    "connect_partition",
    "defective_pair_bound",
    "embed_dense_rooted",
    "greedy_projection",
    "missing_edges",
    "projection_bound",
]

MODES = ("paper_faithful", "relaxed")


@dataclass(frozen=True)
class DenseConfig:
    """Parameters of the dense embedder.

    ``eta`` defaults to ``delta/8`` and ``omega`` to ``20/(eps**2 * eta)``.
    ``l`` is derived from ``p`` and the average degree of H when unset, and
    ``p`` from the host density (``density - eps``).  The ``*_floor`` values
    replace the connector/projector bounds in relaxed mode.
    """

    eps: float = 0.1
    delta: float = 0.5
    eta: float | None = None
    omega: float | None = None
    l: int | None = None
    attempts: int = 20
    mode: str = "relaxed"
    seed: int = 0
    p: float | None = None
    path_floor: int = 0
    projector_floor: int = 0
    min_degree_ratio: float = 0.0
    sample_pairs: int = 50
    full_check: bool = False
    max_len: int | None = None
    missing_threshold: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.attempts < 1:
            raise ValueError("attempts must be at least 1")
        if not self.eps > 0 or not self.delta > 0:
            raise ValueError("eps and delta must be positive")
        if self.mode == "paper_faithful" and not 0 < self.eta_value <= self.delta / 8:
            raise ValueError(f"paper_faithful mode needs 0 < eta <= delta/8, got eta={self.eta_value}")
        if not 0 < self.eta_value < 1:
            raise ValueError("eta must lie in (0, 1)")

    @property
    def eta_value(self) -> float:
        return self.delta / 8 if self.eta is None else self.eta

    @property
    def omega_value(self) -> float:
        return 20 / (self.eps**2 * self.eta_value) if self.omega is None else self.omega

    @property
    def path_len(self) -> int:
        return self.max_len if self.max_len is not None else math.ceil(4 / self.delta)


def _seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


# ---------------------------------------------------------------- equipartitions


@dataclass
class Equipartition:
    """Disjoint parts covering a vertex domain; ``labels[v]`` is the part of H-vertex ``v``."""

    parts: list[list[int]]
    labels: list[int] | None = None

    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]

    def labelled_parts(self) -> list[list[int]]:
        if self.labels is None:
            raise ValueError("equipartition is not labelled")
        return [self.parts[i] for i in self.labels]

    def problems(self, domain: Iterable[int]) -> list[str]:
        out = []
        sizes = self.sizes()
        if sizes and max(sizes) - min(sizes) > 1:
            out.append(f"part sizes range {min(sizes)}..{max(sizes)}")
        flat = [x for p in self.parts for x in p]
        if len(flat) != len(set(flat)):
            out.append("parts overlap")
        if set(flat) != set(domain):
            out.append("parts do not cover the domain")
        return out


def defective_pair_bound(s: int, l: int, p: float, omega: float, eta: float) -> float:
    """``2 s^2 (6 omega)^l ((1-p)/(1-eta))^((1-eta) l (l-1))``."""
    return 2 * s**2 * (6 * omega) ** l * ((1 - p) / (1 - eta)) ** ((1 - eta) * l * (l - 1))


def _indicator(n: int, parts: Sequence[Sequence[int]]) -> np.ndarray:
    M = np.zeros((len(parts), n), dtype=np.float64)
    for i, p in enumerate(parts):
        M[i, list(p)] = 1.0
    return M


def _cross_counts(G: Graph, parts: Sequence[Sequence[int]]) -> np.ndarray:
    M = _indicator(G.n, parts)
    return M @ G.matrix().astype(np.float64) @ M.T


def balanced_equipartition(G: Graph, l: int, seed: int) -> tuple[Equipartition, int]:
    """Degree-banded random equipartition of ``V(G)`` into ``s = |G| // l`` parts.

    Vertices are sorted by degree and cut into ``l`` bands of ``s``; each
    band is shuffled and dealt one vertex per part, so every part gets one
    vertex of each degree band.  The ``|G| - s*l`` leftover (lowest-degree)
    vertices go to the currently smallest parts.  The second value is the
    exact number of part pairs with no edge between them.
    """
    if l < 2:
        raise ValueError("l must be at least 2")
    s = G.n // l
    if s < 2:
        raise ValueError(f"domain of {G.n} vertices is too small for parts of size {l}")
    rng = np.random.default_rng(seed)
    order = sorted(range(G.n), key=lambda v: (-G.degree(v), v))
    parts: list[list[int]] = [[] for _ in range(s)]
    for j in range(l):
        band = np.array(order[j * s : (j + 1) * s])
        for i, v in enumerate(rng.permutation(band)):
            parts[i].append(int(v))
    _redistribute(parts, order[s * l :], range(s))
    eq = Equipartition([sorted(p) for p in parts])
    cross = _cross_counts(G, eq.parts)
    iu = np.triu_indices(s, 1)
    return eq, int(np.count_nonzero(cross[iu] == 0))


def _redistribute(parts: list[list[int]], leftovers: Iterable[int], targets: Iterable[int]) -> None:
    targets = list(targets)
    for v in leftovers:
        i = min(targets, key=lambda j: (len(parts[j]), j))
        parts[i].append(v)


@dataclass
class AlmostCompatibleResult:
    equipartition: Equipartition
    missing: list[tuple[int, int]]
    l: int
    s: int
    attempt: int
    seed: int


def missing_edges(G: Graph, H: Graph, labelled_parts: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """H-edges ``vw`` with no host edge between ``labelled_parts[v]`` and ``labelled_parts[w]``."""
    cross = _cross_counts(G, labelled_parts)
    return [(v, w) for v, w in H.edges() if cross[v, w] == 0]


def _part_length(G: Graph, H: Graph, p: float, eps: float) -> int:
    d = 2 * H.num_edges / H.n if H.n else 0.0
    if p <= 0:
        return 2
    inner = math.log(d) / math.log(1 / (1 - p)) if d > 1 else 0.0
    l = max(2, math.ceil((1 - eps / 4) * math.sqrt(inner)))
    while l > 2 and G.n // l < H.n:
        l -= 1
    return l


def almost_compatible_equipartition(
    G: Graph,
    H: Graph,
    p: float,
    eps: float,
    seed: int,
    *,
    attempts: int = 20,
    mode: str = "relaxed",
    threshold: float | None = None,
    l: int | None = None,
) -> AlmostCompatibleResult:
    """Equipartition of ``V(G)`` into parts labelled by ``V(H)`` with few missing H-edges.

    Each attempt draws a degree-banded equipartition into parts of size
    ``l``, labels ``|H|`` random parts, and hands the vertices of the other
    parts to the smallest labelled parts.  ``missing`` is recomputed exactly
    on the final parts; the attempt with fewest missing edges is kept.
    """
    t = H.n
    if t == 0:
        raise ValueError("H must have at least one vertex")
    density = graph_stats(G).density if G.n else 0.0
    d = 2 * H.num_edges / t
    if density < p + eps - 1e-12:
        raise EmbeddingFailed(
            FailureReport("almost_compatible", "host too sparse", [inequality(density, "<", p + eps, "density")], seed)
        )
    if mode == "paper_faithful" and d > 1:
        need = t * math.sqrt(math.log(d) / math.log(1 / (1 - p)))
        if G.n < need:
            raise EmbeddingFailed(
                FailureReport("almost_compatible", "host too small", [inequality(G.n, "<", need, "|G|")], seed)
            )
    if threshold is None:
        threshold = t * d ** (-eps / 3) if (mode == "paper_faithful" and d > 1) else t
    small = G.n // 2 < t
    if l is None:
        l = 1 if small else _part_length(G, H, p, eps)
    best: AlmostCompatibleResult | None = None
    for attempt, sd in enumerate(_seeds(seed, attempts)):
        rng = np.random.default_rng(sd)
        if l < 2 or G.n // l < t:
            # too few vertices for parts of size >= 2: deal vertices straight to |H| parts
            parts = [[] for _ in range(t)]
            _redistribute(parts, (int(x) for x in rng.permutation(G.n)), range(t))
            s = t
        else:
            eq, _ = balanced_equipartition(G, l, sd)
            s = len(eq.parts)
            chosen = sorted(int(i) for i in rng.choice(s, size=t, replace=False))
            parts = [list(eq.parts[i]) for i in chosen]
            taken = set(chosen)
            rest = [x for i in range(s) if i not in taken for x in eq.parts[i]]
            _redistribute(parts, rest, range(t))
        labelled = Equipartition([sorted(q) for q in parts], list(range(t)))
        miss = missing_edges(G, H, labelled.parts)
        if best is None or len(miss) < len(best.missing):
            best = AlmostCompatibleResult(labelled, miss, l, s, attempt, sd)
        if not miss:
            break
    assert best is not None
    if len(best.missing) > threshold:
        raise EmbeddingFailed(
            FailureReport(
                "almost_compatible",
                "too many H-edges without a host edge between their parts",
                [inequality(len(best.missing), ">", threshold, "|missing|")],
                seed,
                {"l": l, "attempts": attempts},
            )
        )
    return best


# ---------------------------------------------------------------- connector / projector


@dataclass
class ConnectorProjector:
    C: frozenset[int]
    P: frozenset[int]
    R: frozenset[int]
    certificate: dict = field(default_factory=dict)


def build_connector_projector(
    G: Graph,
    R: Iterable[int],
    delta: float,
    eta: float,
    seed: int,
    *,
    mode: str = "relaxed",
    attempts: int = 20,
    path_floor: int = 0,
    projector_floor: int = 0,
    min_degree_ratio: float = 0.0,
    sample_pairs: int = 50,
    full_check: bool = False,
    max_len: int | None = None,
) -> ConnectorProjector:
    """Sample a connector ``C`` from ``G - R`` and a projector ``P`` from ``G - C - R``.

    Each set includes vertices independently with probability ``eta`` and is
    redrawn until its measurable properties hold: ``|C|, |P| <= 2 eta |G|``;
    sampled pairs outside ``C`` joined by enough short paths through ``C``;
    every vertex outside ``P`` with enough neighbours in ``P``.  In
    paper-faithful mode the floors are the exact asymptotic expressions and
    ``kappa(G) >= delta |G|`` is checked exactly; relaxed mode uses the given
    floors and optionally ``min_degree >= min_degree_ratio * |G|``.
    """
    n = G.n
    R = frozenset(int(r) for r in R)
    L = max_len if max_len is not None else math.ceil(4 / delta)
    stage = "connector_projector"
    if mode == "paper_faithful":
        if not 0 < eta <= delta / 8:
            raise ValueError(f"paper_faithful mode needs 0 < eta <= delta/8, got eta={eta}")
        if len(R) > eta * n:
            raise EmbeddingFailed(FailureReport(stage, "too many roots", [inequality(len(R), ">", eta * n, "|R|")], seed))
        kappa = vertex_connectivity(G, cutoff=math.ceil(delta * n)) if n >= 2 else 0
        if kappa < delta * n:
            raise EmbeddingFailed(
                FailureReport(stage, "host not connected enough", [inequality(kappa, "<", delta * n, "kappa")], seed)
            )
        want_paths = max(1, math.ceil(delta**2 * eta ** (4 / delta) * n / 32))
        want_proj = max(1, math.ceil(eta * delta * n / 4))
    else:
        if min_degree_ratio > 0 and n:
            mindeg = int(G.degrees().min())
            if mindeg < min_degree_ratio * n:
                raise EmbeddingFailed(
                    FailureReport(stage, "minimum degree below floor", [inequality(mindeg, "<", min_degree_ratio * n, "min_degree")], seed)
                )
        want_paths, want_proj = path_floor, projector_floor

    cap = 2 * eta * n
    A = G.matrix()
    rng = np.random.default_rng(seed)
    outside_R = np.array([v not in R for v in range(n)], dtype=bool)
    cert: dict = {"eta": eta, "delta": delta, "size_cap": cap, "path_floor": want_paths,
                  "projector_floor": want_proj, "max_len": L}

    last = None
    for _ in range(attempts):
        C = frozenset(np.flatnonzero(outside_R & (rng.random(n) < eta)).tolist())
        if len(C) > cap:
            last = inequality(len(C), ">", cap, "|C|")
            continue
        worst, checked = _spot_check_connector(G, C, L, want_paths, sample_pairs, full_check, rng)
        if worst < want_paths:
            last = inequality(worst, "<", want_paths, "short paths through C")
            continue
        break
    else:
        raise EmbeddingFailed(FailureReport(stage, "no connector satisfied the certificate", [last], seed, {"attempts": attempts}))
    cert.update(C_size=len(C), pairs_checked=checked, min_paths_seen=worst)

    free = outside_R.copy()
    free[list(C)] = False
    for _ in range(attempts):
        P = frozenset(np.flatnonzero(free & (rng.random(n) < eta)).tolist())
        if len(P) > cap:
            last = inequality(len(P), ">", cap, "|P|")
            continue
        inP = np.zeros(n, dtype=bool)
        inP[list(P)] = True
        counts = A[:, inP].sum(axis=1)[~inP]
        low = int(counts.min()) if len(counts) else want_proj
        if low < want_proj:
            last = inequality(low, "<", want_proj, "neighbours in P")
            continue
        break
    else:
        raise EmbeddingFailed(FailureReport(stage, "no projector satisfied the certificate", [last], seed, {"attempts": attempts}))
    cert.update(P_size=len(P), min_projector_degree=low)
    assert not (C & P) and not (C & R) and not (P & R)
    return ConnectorProjector(C, P, R, cert)


def _spot_check_connector(G, C, L, want, sample_pairs, full_check, rng) -> tuple[int, int]:
    outside = [v for v in range(G.n) if v not in C]
    if len(outside) < 2 or want <= 0:
        return want, 0
    if full_check:
        pairs = [(outside[i], outside[j]) for i in range(len(outside)) for j in range(i + 1, len(outside))]
    else:
        pairs = []
        for _ in range(sample_pairs):
            i, j = rng.choice(len(outside), size=2, replace=False)
            pairs.append((outside[i], outside[j]))
    blocked = frozenset(outside)
    worst = want
    for u, v in pairs:
        got = disjoint_short_paths(G, u, v, L, want, blocked - {u, v})
        worst = min(worst, len(got))
        if worst < want:
            break
    return worst, len(pairs)


# ---------------------------------------------------------------- projection


def projection_bound(size: int, gamma: float) -> int:
    """``floor(log_{1/(1-gamma)} size) + 1``; a single vertex suffices when ``gamma >= 1``."""
    if size <= 0:
        return 0
    if gamma >= 1:
        return 1
    return math.floor(math.log(size) / math.log(1 / (1 - gamma)) + 1e-12) + 1


def greedy_projection(
    A: Iterable[int],
    B: Iterable[int],
    adjacency: Graph,
    gamma: float,
    forbidden: Iterable[int] = (),
) -> list[int]:
    """Greedy set ``M`` in ``B - forbidden`` dominating ``A``, in pick order.

    Each step picks the vertex covering the most still-uncovered vertices of
    ``A`` (lowest id on ties).  If every vertex of ``A`` has at least
    ``gamma * |B - forbidden|`` neighbours there, the uncovered mass shrinks
    by a factor ``1 - gamma`` per step, which gives the size bound; it is
    asserted whenever the degree condition holds.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    A = sorted(set(A))
    forbidden = set(forbidden)
    Bf = sorted(set(B) - forbidden)
    if not A:
        return []
    sub = adjacency.matrix()[np.ix_(A, Bf)] if Bf else np.zeros((len(A), 0), dtype=bool)
    degs = sub.sum(axis=1)
    uncoverable = [A[i] for i in np.flatnonzero(degs == 0)]
    if uncoverable:
        raise ValueError(f"vertices {uncoverable[:5]} have no neighbour in B - forbidden")
    uncovered = np.ones(len(A), dtype=bool)
    M = []
    while uncovered.any():
        gain = sub[uncovered].sum(axis=0)
        j = int(np.argmax(gain))
        M.append(Bf[j])
        uncovered &= ~sub[:, j]
    if degs.min() >= gamma * len(Bf):
        bound = projection_bound(len(A), gamma)
        assert len(M) <= bound, f"|M| = {len(M)} > {bound}"
    return M


# ---------------------------------------------------------------- connecting the parts


def branch_set_problems(
    G: Graph,
    roots: Sequence[int],
    sets: Sequence[Iterable[int]],
    F: Iterable[tuple[int, int]] = (),
    parts: Sequence[Iterable[int]] | None = None,
) -> list[str]:
    """Check disjointness, root membership, connectivity, part containment and F-adjacency."""
    sets = [set(s) for s in sets]
    out = []
    owner: dict[int, int] = {}
    for i, s in enumerate(sets):
        for x in s:
            if x in owner:
                out.append(f"vertex {x} in U_{owner[x]} and U_{i}")
            owner[x] = i
        if roots[i] not in s:
            out.append(f"root {roots[i]} not in U_{i}")
        if not G.is_connected(s):
            out.append(f"U_{i} is not connected")
        if parts is not None and not set(parts[i]) <= s:
            out.append(f"U_{i} does not contain its part")
    for i, j in F:
        if not any(G.neighbors(x) & sets[j] for x in sets[i]):
            out.append(f"no edge between U_{i} and U_{j}")
    return out


def connect_partition(
    G: Graph,
    roots: Sequence[int],
    cp: ConnectorProjector,
    parts: Sequence[Iterable[int]],
    F: Iterable[tuple[int, int]] = (),
    *,
    max_len: int | None = None,
    seed: int | None = None,
) -> list[frozenset[int]]:
    """Grow disjoint connected sets ``U_i ⊇ parts[i] ∪ {roots[i]}`` realising every pair in ``F``.

    A set that is not connected first takes a greedy dominating set ``M_i``
    from the unused projector, then its components are joined by shortest
    paths through unused connector vertices.  For each pair ``(i, j)`` in
    ``F`` without a ``U_i``–``U_j`` edge, a shortest path from ``U_i`` to
    ``U_j`` through unused connector vertices is added to ``U_j``.
    """
    stage = "connect_partition"
    roots = [int(r) for r in roots]
    F = [tuple(x) for x in F]
    if len(parts) != len(roots):
        raise ValueError("one part per root is required")
    free_C = set(cp.C)
    free_P = set(cp.P)
    U = [set(p) | {r} for p, r in zip(parts, roots)]

    for i, Ui in enumerate(U):
        if G.is_connected(Ui):
            continue
        X = sorted(Ui)
        bare = [x for x in X if not G.neighbors(x) & free_P]
        if not bare:
            gamma = min(len(G.neighbors(x) & free_P) for x in X) / len(free_P)
            M = greedy_projection(X, free_P, G, gamma)
            Ui |= set(M)
            free_P -= set(M)
            via = free_C
        else:
            # some vertex sees no unused projector vertex: join the pieces
            # through every unused put-aside vertex instead
            via = free_C | free_P
        comps = G.components(Ui)
        while len(comps) > 1:
            head, rest = comps[0], set().union(*comps[1:])
            path = shortest_path(G, sorted(head), rest, via.__contains__, max_len)
            if path is None:
                raise EmbeddingFailed(
                    FailureReport(stage, f"no put-aside path joins the components of part {i}",
                                  [inequality(len(comps), ">", 1, "components")], seed,
                                  {"part": i, "undominated": len(bare)})
                )
            inner = set(path[1:-1])
            Ui |= inner
            free_C -= inner
            free_P -= inner
            via = via - inner
            comps = G.components(Ui)

    for i, j in F:
        if any(G.neighbors(x) & U[j] for x in U[i]):
            continue
        path = shortest_path(G, sorted(U[i]), U[j], free_C.__contains__, max_len)
        if path is None:
            raise EmbeddingFailed(
                FailureReport(stage, f"no connector path realises the pair ({i}, {j})",
                              [inequality(0, "<", 1, f"paths U_{i}-U_{j} through C")], seed,
                              {"pair": [i, j], "free_connector": len(free_C)})
            )
        inner = path[1:-1]
        U[j] |= set(inner)
        free_C -= set(inner)

    problems = branch_set_problems(G, roots, U, F, parts)
    assert not problems, problems
    return [frozenset(s) for s in U]


# ---------------------------------------------------------------- the dense embedder


def _check_roots(G: Graph, H: Graph, R: Sequence[int]) -> list[int]:
    R = [int(r) for r in R]
    if len(R) != H.n:
        raise ValueError(f"{len(R)} roots for a target on {H.n} vertices")
    if len(set(R)) != len(R):
        raise ValueError("roots must be distinct")
    if any(not 0 <= r < G.n for r in R):
        raise ValueError("root outside host range")
    return R


def embed_dense_rooted(G: Graph, H: Graph, R: Sequence[int], config: DenseConfig = DenseConfig()) -> MinorModel:
    """An H minor of ``G`` rooted at ``R`` (``R[v]`` is the root of H-vertex ``v``).

    Order of work: connector/projector on ``G``; almost-compatible
    equipartition of ``G - C - P - R``; ``connect_partition`` with ``F`` the
    missing pairs.  Raises :class:`EmbeddingFailed` with a stage-tagged
    report when every attempt fails.  Every returned model is verified.
    """
    if G.n < H.n:
        raise EmbeddingFailed(
            FailureReport("dense/precondition", "host has fewer vertices than the target",
                          [inequality(G.n, "<", H.n, "|G|")], config.seed)
        )
    R = _check_roots(G, H, R)
    if H.n == 0:
        return MinorModel(H, [], [])
    cfg = config
    density = graph_stats(G).density if G.n > 1 else 0.0
    p = cfg.p if cfg.p is not None else density - cfg.eps
    delta, eta = cfg.delta, cfg.eta_value
    if cfg.mode == "paper_faithful":
        fails = []
        if not cfg.eps < p < 1 - cfg.eps:
            fails.append(inequality(p, "not in", f"({cfg.eps}, {1 - cfg.eps})", "p"))
        if density < p + cfg.eps:
            fails.append(inequality(density, "<", p + cfg.eps, "density"))
        if fails:
            raise EmbeddingFailed(FailureReport("dense/precondition", "density condition fails", fails, cfg.seed))
        delta = min(delta, cfg.eps / 2)

    failures: list[FailureReport] = []
    for attempt, sd in enumerate(_seeds(cfg.seed, cfg.attempts)):
        s_cp, s_eq = _seeds(sd, 2)
        try:
            cp = build_connector_projector(
                G, R, delta, eta, s_cp, mode=cfg.mode, attempts=cfg.attempts,
                path_floor=cfg.path_floor, projector_floor=cfg.projector_floor,
                min_degree_ratio=cfg.min_degree_ratio, sample_pairs=cfg.sample_pairs,
                full_check=cfg.full_check, max_len=cfg.path_len,
            )
            keep = sorted(set(range(G.n)) - cp.C - cp.P - cp.R)
            Gp, order = G.induced_subgraph(keep)
            if cfg.mode == "paper_faithful":
                p2, eps2 = p + delta / 2, cfg.eps - 1.5 * delta
            else:
                dens2 = graph_stats(Gp).density if Gp.n > 1 else 0.0
                eps2 = min(cfg.eps, dens2)
                p2 = min(dens2 - eps2, 1 - 1e-6)
            ac = almost_compatible_equipartition(
                Gp, H, p2, eps2, s_eq, attempts=cfg.attempts, mode=cfg.mode,
                threshold=cfg.missing_threshold if cfg.mode == "paper_faithful" else math.inf, l=cfg.l,
            )
            parts = [[order[x] for x in part] for part in ac.equipartition.labelled_parts()]
            F = ac.missing
            if cfg.mode != "paper_faithful":
                # relaxed: a root already adjacent to the other side settles the pair
                F = missing_edges(G, H, [part + [r] for part, r in zip(parts, R)])
                limit = H.n if cfg.missing_threshold is None else cfg.missing_threshold
                if len(F) > limit:
                    raise EmbeddingFailed(FailureReport(
                        "almost_compatible", "too many H-edges without a host edge between their parts",
                        [inequality(len(F), ">", limit, "|missing|")], s_eq, {"l": ac.l},
                    ))
            U = connect_partition(G, R, cp, parts, F, max_len=None, seed=sd)
        except EmbeddingFailed as exc:
            failures.append(replace(exc.report, details={**exc.report.details, "attempt": attempt}))
            continue
        model = MinorModel(H, U, R)
        violations = verify_model(G, model)
        assert not violations, violations
        return model
    last = failures[-1]
    raise EmbeddingFailed(
        FailureReport(
            f"dense/{last.stage}", last.reason, last.violated, cfg.seed,
            {**last.details, "attempts": cfg.attempts, "stages": dict(Counter(f.stage for f in failures))},
        )
    )
