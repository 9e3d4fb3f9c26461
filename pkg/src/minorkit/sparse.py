"""H minors in sparse minor-minimal hosts.

The host is mined for 16 disjoint dense cores ``T_0 .. T_15``.  H is cut
into six parts and the 15 pieces ``H[V_i ∪ V_j]`` are embedded as rooted
minors in ``T_1 .. T_15``; a flow routes one path from ``T_0`` to every
piece root, and short paths inside ``T_0`` tie each H-vertex's root to its
five piece roots.  When the cores cannot be found because low-degree
vertices all see the cores built so far, a contraction of the bipartite
graph between them yields a dense subgraph that hosts H directly.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .connectivity import disjoint_paths_between_sets, minimum_vertex_cut, shortest_path, vertex_connectivity
from .dense import DenseConfig, embed_dense_rooted
from .failure import EmbeddingFailed, FailureReport, inequality
from .graph import Graph
from .oracle import MinorModel, verify_model

__all__ = [
    "BipartiteInstance",
    "ContractionOutcome",
    "DenseCoreFamily",
    "PathPlan",
    "PiecePlan",
    "SparseConfig",
    "SparseRun",
    "bipartite_contraction_minor",
    "embed_sparse",
    "find_dense_cores",
    "partition_H",
    "path_plan_problems",
    "route_paths",
    "run_sparse",
]

N_PARTS = 6
N_PIECES = 15
N_CORES = 16


@dataclass(frozen=True)
class SparseConfig:
    """Thresholds of the sparse embedder; the defaults mirror the proof's constants.

    ``connectivity_multiple`` is the required ``kappa(G) / |H|`` (100 in
    paper-faithful mode).  ``piece_*`` configure the per-piece dense calls.
    """

    mode: str = "relaxed"
    seed: int = 0
    attempts: int = 5
    q: float = 0.1
    core_degree_ratio: float = 5 / 6
    core_size_ratio: float = 6.0
    cut_ratio: float = 1 / 40
    path_budget: int = 480
    connectivity_multiple: float = 4.0
    check_connectivity: bool = True
    size_threshold: float = 600.0
    piece_eps: float = 1 / 1000
    piece_delta: float = 1 / 600
    piece_eta: float = 0.1
    piece_attempts: int = 20

    def __post_init__(self):
        if self.mode not in ("paper_faithful", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 < self.q < 0.25:
            raise ValueError("q must lie in (0, 1/4)")
        if self.attempts < 1:
            raise ValueError("attempts must be at least 1")
        if self.mode == "relaxed" and self.connectivity_multiple < 4:
            raise ValueError("relaxed mode needs a connectivity multiple of at least 4")

    @property
    def kappa_multiple(self) -> float:
        return 100.0 if self.mode == "paper_faithful" else self.connectivity_multiple


def _seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


# ---------------------------------------------------------------- bipartite contraction


@dataclass
class ContractionOutcome:
    """Result of contracting ``A`` into ``B``.

    ``kind`` is ``"dense_core"`` (``core`` is ``G*[N(a)]``, ``core_vertices``
    its B-vertices, ``branch[b]`` the host vertices merged into ``b``) or
    ``"exhausted"`` (no neighbourhood was dense; ``added_edges`` etc. record
    the edge-count argument).
    """

    kind: str
    steps: list[dict]
    added_edges: int
    pair_cap: int
    core: Graph | None = None
    core_vertices: list[int] = field(default_factory=list)
    branch: dict[int, frozenset[int]] = field(default_factory=dict)
    q_a: float | None = None
    pivot: int | None = None

    def lift(self, model: MinorModel) -> list[frozenset[int]]:
        """Host branch sets for a model found in ``core``."""
        return [frozenset().union(*(self.branch[self.core_vertices[x]] for x in b)) for b in model.branch_sets]


def bipartite_contraction_minor(
    G: Graph,
    A: Iterable[int],
    B: Iterable[int],
    m: float,
    q: float,
    *,
    mode: str = "relaxed",
    keep_B_edges: bool = False,
) -> ContractionOutcome:
    """Contract each ``a`` in ``A`` (ascending) into a ``b`` of minimum degree in ``G*[N(a)]``.

    Only ``A``–``B`` edges of ``G`` are used.  Each ``a`` is merged into the
    lowest-id vertex of minimum degree in ``G*[N(a)]`` (``G*`` is the current
    graph on ``B``), which adds ``|N(a)| - 1 - deg(b)`` edges, at least
    ``q_a (|N(a)| - 1)`` where ``1 - q_a`` is the density of ``G*[N(a)]``.
    The first ``a`` with ``q_a <= q`` stops the process and returns that
    neighbourhood as a dense core.  With ``keep_B_edges`` the host's edges
    inside ``B`` seed ``G*``; the result is still a minor of ``G``.
    """
    if not 0 < q < 0.25:
        raise ValueError("q must lie in (0, 1/4)")
    A, B = sorted(set(A)), sorted(set(B))
    if set(A) & set(B):
        raise ValueError("A and B must be disjoint")
    Bset = set(B)
    nbrs = {a: sorted(G.neighbors(a) & Bset) for a in A}
    low = min((len(v) for v in nbrs.values()), default=0)
    if mode == "paper_faithful" and low < m / 6:
        raise ValueError(f"some vertex of A has {low} < m/6 = {m / 6} neighbours in B")
    # edges of G* inside B
    star = {b: (set(G.neighbors(b) & Bset) if keep_B_edges else set()) for b in B}
    branch = {b: {b} for b in B}
    steps = []
    added_total = 0
    cap = len(B) * (len(B) - 1) // 2
    for a in A:
        N = nbrs[a]
        k = len(N)
        if k == 0:
            steps.append({"a": a, "size": 0})
            continue
        inside = {b: len(star[b] & set(N)) for b in N}
        pairs = k * (k - 1) // 2
        e_in = sum(inside.values()) // 2
        density = e_in / pairs if pairs else 1.0
        q_a = 1 - density
        if q_a <= q:
            core_vertices = list(N)
            idx = {b: i for i, b in enumerate(core_vertices)}
            core = Graph(k, [(idx[x], idx[y]) for x in N for y in star[x] if y in idx and idx[x] < idx[y]])
            steps.append({"a": a, "size": k, "q_a": q_a, "stopped": True})
            return ContractionOutcome(
                "dense_core", steps, added_total, cap, core, core_vertices,
                {b: frozenset(branch[b]) for b in core_vertices}, q_a, a,
            )
        b = min(N, key=lambda x: (inside[x], x))
        before = len(star[b])
        for y in N:
            if y != b:
                star[b].add(y)
                star[y].add(b)
        added = len(star[b]) - before
        assert added == k - 1 - inside[b]
        assert added >= q_a * (k - 1) - 1e-9, (added, q_a, k)
        branch[b].add(a)
        added_total += added
        steps.append({"a": a, "b": b, "size": k, "q_a": q_a, "added": added})
        assert added_total <= cap
    return ContractionOutcome("exhausted", steps, added_total, cap)


# ---------------------------------------------------------------- dense cores


@dataclass
class DenseCoreFamily:
    m: float
    S: list[list[int]]
    T: list[list[int]]
    stats: list[dict]
    pivots: list[int]


@dataclass
class BipartiteInstance:
    """The other side of the core dichotomy: every low-degree vertex sees the cores."""

    A: list[int]
    B: list[int]
    found: int
    min_B_degree: int


def _peel(G: Graph, S: set[int], floor: float) -> set[int]:
    S = set(S)
    changed = True
    while changed and S:
        changed = False
        for x in sorted(S):
            if len(G.neighbors(x) & S) <= floor:
                S.discard(x)
                changed = True
    return S


def _refine(G: Graph, S: list[int], m: float, cut_ratio: float) -> tuple[list[int], int, int]:
    """Cut away to the smallest component until ``kappa >= cut_ratio * m``; at most 3 rounds."""
    T = sorted(S)
    need = math.ceil(cut_ratio * m - 1e-12)
    rounds = 0
    while True:
        sub, order = G.induced_subgraph(T)
        kappa = vertex_connectivity(sub, cutoff=need) if sub.n >= 2 else 0
        if kappa >= need:
            return T, rounds, kappa
        cut = minimum_vertex_cut(sub)
        assert cut is not None and len(cut) < need
        comps = sub.components([x for x in range(sub.n) if x not in cut])
        smallest = min(comps, key=lambda c: (len(c), min(c)))
        T = sorted(order[x] for x in smallest)
        rounds += 1
        if rounds > 3:
            raise AssertionError(f"core refinement needed {rounds} > 3 rounds")


def find_dense_cores(G: Graph, m: float, config: SparseConfig = SparseConfig()) -> DenseCoreFamily | BipartiteInstance:
    """Build ``S_0 .. S_15`` and refine each to ``T_i``.

    ``S_k = Γ(a) - B`` for the lowest-id vertex ``a`` outside ``B`` (the
    union of earlier cores) with degree at most ``6m`` and fewer than
    ``m/6`` neighbours in ``B``.  Relaxed mode peels ``S_k`` to minimum
    degree above ``(5/6)m - 1`` and tries the next ``a`` if nothing is left;
    paper-faithful mode requires that bound outright.  If no such ``a``
    exists the bipartite instance between ``A`` and ``B`` is returned.
    """
    floor = config.core_degree_ratio * m - 1
    B: set[int] = set()
    S_list, pivots = [], []
    tried: set[int] = set()
    while len(S_list) < N_CORES:
        A = [v for v in range(G.n) if v not in B and G.degree(v) <= config.core_size_ratio * m]
        cand = [a for a in A if a not in tried and len(G.neighbors(a) & B) < m / 6]
        if not cand:
            if A and all(len(G.neighbors(a) & B) >= m / 6 for a in A):
                return BipartiteInstance(A, sorted(B), len(S_list), min(len(G.neighbors(a) & B) for a in A))
            raise EmbeddingFailed(
                FailureReport("cores", "ran out of pivot vertices",
                              [inequality(len(S_list), "<", N_CORES, "cores found")], config.seed,
                              {"B_size": len(B)})
            )
        a = cand[0]
        tried.add(a)
        S = set(G.neighbors(a)) - B
        mindeg = min((len(G.neighbors(x) & S) for x in S), default=0)
        if mindeg <= floor:
            if config.mode == "paper_faithful":
                raise EmbeddingFailed(
                    FailureReport("cores", "neighbourhood core is not dense enough",
                                  [inequality(mindeg, "<=", floor, "min degree in G[S]")], config.seed, {"pivot": a})
                )
            S = _peel(G, S, floor)
            if not S:
                continue
        S_list.append(sorted(S))
        pivots.append(a)
        B |= S
    T_list, stats = [], []
    for S in S_list:
        T, rounds, kappa = _refine(G, S, m, config.cut_ratio)
        sub = G.induced_subgraph(T)[0]
        stats.append({
            "S_size": len(S),
            "S_min_degree": int(G.induced_subgraph(S)[0].degrees().min()),
            "T_size": len(T),
            "T_min_degree": int(sub.degrees().min()) if sub.n else 0,
            "T_connectivity": int(kappa),
            "refinement_rounds": rounds,
        })
        T_list.append(T)
    return DenseCoreFamily(m, S_list, T_list, stats, pivots)


# ---------------------------------------------------------------- pieces of H


@dataclass
class PiecePlan:
    """Six parts of ``V(H)``, the 15 pieces ``H[V_i ∪ V_j]`` and their padded versions.

    ``vertices[k]`` lists the H-vertices of piece ``k`` (piece ``k`` is the
    pair ``pairs[k]``); ``padded[k]`` is a graph on ``range(len(vertices[k]))``
    containing every H-edge of the piece.
    """

    parts: list[list[int]]
    pairs: list[tuple[int, int]]
    vertices: list[list[int]]
    padded: list[Graph]
    target_degree: float

    def pieces_of(self, v: int) -> list[int]:
        return [k for k, vs in enumerate(self.vertices) if v in vs]

    def piece_graph(self, H: Graph, k: int) -> Graph:
        return H.induced_subgraph(self.vertices[k])[0]


def partition_H(H: Graph, seed: int) -> PiecePlan:
    """Random 6-equipartition of ``V(H)`` and padded pieces.

    Pieces whose average degree is below ``d/4`` get random non-edges until
    they reach it, never passing ``4d``.  Graphs with fewer than six vertices
    leave some parts empty.
    """
    rng = np.random.default_rng(seed)
    t = H.n
    if t < 1:
        raise ValueError("H must have a vertex")
    perm = [int(x) for x in rng.permutation(t)]
    parts = [sorted(perm[i::N_PARTS]) for i in range(N_PARTS)]
    d = 2 * H.num_edges / t
    pairs, vertices, padded = [], [], []
    for i, j in combinations(range(N_PARTS), 2):
        vs = sorted(parts[i] + parts[j])
        sub = H.induced_subgraph(vs)[0]
        k = len(vs)
        edges = set(sub.edges())
        if k >= 2:
            non = [e for e in combinations(range(k), 2) if e not in edges]
            for idx in rng.permutation(len(non)):
                if 2 * len(edges) / k >= d / 4 or 2 * (len(edges) + 1) / k > 4 * d:
                    break
                edges.add(non[idx])
        pairs.append((i, j))
        vertices.append(vs)
        padded.append(Graph(k, edges))
    return PiecePlan(parts, pairs, vertices, padded, d)


# ---------------------------------------------------------------- path routing


@dataclass
class PathPlan:
    """Paths ``paths[(v, k)]`` from ``roots[v]`` in ``T_0`` to ``piece_roots[k][i]``,
    where ``i`` is the position of ``v`` in piece ``k``."""

    roots: list[int]
    piece_roots: list[list[int]]
    paths: dict[tuple[int, int], list[int]]
    core_usage: dict[tuple[int, int], list[int]]
    menger_paths: int

    def piece_root(self, plan: PiecePlan, v: int, k: int) -> int:
        return self.piece_roots[k][plan.vertices[k].index(v)]


def _segment_bounds(path: Sequence[int], core: set[int]) -> tuple[int, int] | None:
    idx = [i for i, x in enumerate(path) if x in core]
    return (idx[0], idx[-1]) if idx else None


def route_paths(
    G: Graph,
    cores: DenseCoreFamily,
    plan: PiecePlan,
    config: SparseConfig = SparseConfig(),
    seed: int | None = None,
) -> PathPlan:
    """Disjoint paths from the global roots in ``T_0`` to every piece root.

    Steps: a max flow in ``G - R`` gives ``5|H|`` disjoint paths from
    ``T_0 - R`` to the piece roots; inside each piece core the stretch of a
    path between its first and last visit is replaced by a short path,
    first freely and then again avoiding earlier short paths and all
    short-path ends; finally internally disjoint short paths in ``T_0`` join
    each global root to the starts of its five paths.
    """
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    H_n = sum(len(p) for p in plan.parts)
    budget = config.path_budget
    T0 = cores.T[0]
    piece_cores = [set(T) for T in cores.T[1 : 1 + N_PIECES]]
    stage = "route"
    if len(T0) < H_n or any(len(T) < len(vs) for T, vs in zip(piece_cores, plan.vertices)):
        raise EmbeddingFailed(FailureReport(stage, "a core is smaller than its root set", [], seed))
    roots = sorted(int(x) for x in rng.choice(T0, size=H_n, replace=False))
    roots = [int(x) for x in rng.permutation(roots)]
    piece_roots = [[int(x) for x in rng.choice(sorted(T), size=len(vs), replace=False)] for T, vs in zip(piece_cores, plan.vertices)]
    owner = {}
    for k, vs in enumerate(plan.vertices):
        for v, r in zip(vs, piece_roots[k]):
            owner[r] = (v, k)
    R = set(roots)
    Rstar = set(owner)

    flows = disjoint_paths_between_sets(G, set(T0) - R, Rstar, blocked=R)
    if len(flows) < len(Rstar):
        raise EmbeddingFailed(
            FailureReport(stage, "Menger step came up short",
                          [inequality(len(flows), "<", len(Rstar), "disjoint paths")], seed)
        )
    assert len(flows) == len(Rstar) == 5 * H_n
    Q = {owner[p[-1]]: list(p) for p in flows}
    all_roots = R | Rstar

    # first pass: one visit per core, short paths allowed to collide
    for key in sorted(Q):
        path = Q[key]
        for c, core in enumerate(piece_cores):
            span = _segment_bounds(path, core)
            if span is None or span[0] == span[1]:
                continue
            i, j = span
            short = shortest_path(G, [path[i]], {path[j]}, lambda x, core=core: x in core and x not in all_roots, budget - 1)
            if short is None:
                raise EmbeddingFailed(FailureReport(stage, f"no short path inside core {c + 1}", [], seed, {"path": list(key)}))
            path[i : j + 1] = short
        Q[key] = path

    # second pass: short paths disjoint from each other and from every end
    for c, core in enumerate(piece_cores):
        spans = {key: _segment_bounds(Q[key], core) for key in sorted(Q)}
        spans = {k: s for k, s in spans.items() if s is not None}
        ends = {Q[k][s[0]] for k, s in spans.items()} | {Q[k][s[1]] for k, s in spans.items()}
        used: set[int] = set()
        for key, (i, j) in spans.items():
            path = Q[key]
            x, y = path[i], path[j]
            if x == y:
                continue
            short = shortest_path(
                G, [x], {y}, lambda z, core=core: z in core and z not in ends and z not in used and z not in all_roots,
                budget - 1,
            )
            if short is None:
                raise EmbeddingFailed(
                    FailureReport(stage, f"disjoint rerouting failed inside core {c + 1}",
                                  [inequality(len(used), ">", 0, "vertices already taken")], seed, {"path": list(key), "core": c + 1})
                )
            used.update(short[1:-1])
            path[i : j + 1] = short

    # extension inside T_0 from r_v to x_v^{k}
    T0set = set(T0)
    starts = {key: Q[key][0] for key in Q}
    taken = set(starts.values())
    used0: set[int] = set()
    paths: dict[tuple[int, int], list[int]] = {}
    for key in sorted(Q):
        v, k = key
        r, x = roots[v], starts[key]
        ext = shortest_path(
            G, [r], {x}, lambda z: z in T0set and z not in R and z not in taken and z not in used0, budget - 1,
        )
        if ext is None:
            raise EmbeddingFailed(FailureReport(stage, "no short path in the root core", [], seed, {"path": list(key)}))
        used0.update(ext[1:-1])
        paths[key] = ext[:-1] + Q[key]

    core_sets = [T0set] + piece_cores
    usage = {key: [sum(1 for z in p if z in core) for core in core_sets] for key, p in paths.items()}
    plan_out = PathPlan(roots, piece_roots, paths, usage, len(flows))
    problems = path_plan_problems(G, cores, plan, plan_out, budget)
    assert not problems, problems
    return plan_out


def path_plan_problems(G: Graph, cores: DenseCoreFamily, plan: PiecePlan, pp: PathPlan, budget: int = 480) -> list[str]:
    """Independent check of a path plan: ends, simplicity, disjointness, one visit and budget per core."""
    out = []
    core_sets = [set(T) for T in cores.T[: 1 + N_PIECES]]
    expected = {(v, k) for k, vs in enumerate(plan.vertices) for v in vs}
    if set(pp.paths) != expected:
        out.append("paths do not match the (vertex, piece) pairs")
    internal_owner: dict[int, tuple] = {}
    root_set = set(pp.roots) | {r for rs in pp.piece_roots for r in rs}
    for key, p in sorted(pp.paths.items()):
        v, k = key
        if p[0] != pp.roots[v] or p[-1] != pp.piece_root(plan, v, k):
            out.append(f"path {key} has wrong ends")
        if len(set(p)) != len(p):
            out.append(f"path {key} repeats a vertex")
        for a, b in zip(p, p[1:]):
            if not G.has_edge(a, b):
                out.append(f"path {key} uses non-edge ({a}, {b})")
        for z in p[1:-1]:
            if z in root_set:
                out.append(f"path {key} passes root {z}")
            if z in internal_owner:
                out.append(f"paths {internal_owner[z]} and {key} share {z}")
            internal_owner[z] = key
        for c, core in enumerate(core_sets):
            idx = [i for i, z in enumerate(p) if z in core]
            if idx and idx[-1] - idx[0] + 1 != len(idx):
                out.append(f"path {key} enters core {c} more than once")
            if len(idx) > budget:
                out.append(f"path {key} uses {len(idx)} > {budget} vertices of core {c}")
    ends = [p[-1] for p in pp.paths.values()]
    if len(set(ends)) != len(ends):
        out.append("two paths end at the same piece root")
    return out


# ---------------------------------------------------------------- assembly


@dataclass
class SparseRun:
    model: MinorModel
    trace: dict


def _hypotheses(G: Graph, H: Graph, m: float, config: SparseConfig, kappa: int | None) -> dict:
    tri = min((len(G.neighbors(u) & G.neighbors(v)) for u, v in G.edges()), default=0)
    return {
        "n": G.n, "e": G.num_edges, "m": m, "size_threshold": config.size_threshold * m,
        "kappa": kappa, "kappa_needed": config.kappa_multiple * H.n,
        "min_edge_triangles": tri, "edges_at_most_m_n": G.num_edges <= m * G.n,
    }


def _embed_via_core(G: Graph, H: Graph, inst: BipartiteInstance, m: float, config: SparseConfig, trace: dict) -> SparseRun:
    outcome = bipartite_contraction_minor(G, inst.A, inst.B, m, config.q, mode=config.mode, keep_B_edges=True)
    trace["bipartite"] = {"kind": outcome.kind, "added_edges": outcome.added_edges, "pair_cap": outcome.pair_cap,
                          "steps": len(outcome.steps), "q_a": outcome.q_a}
    if outcome.kind != "dense_core":
        raise EmbeddingFailed(
            FailureReport("sparse/bipartite", "no dense neighbourhood appeared",
                          [inequality(outcome.added_edges, "<=", outcome.pair_cap, "edges added")], config.seed, trace["bipartite"])
        )
    core = outcome.core
    if core.n < H.n:
        raise EmbeddingFailed(FailureReport("sparse/bipartite", "dense core smaller than H",
                                            [inequality(core.n, "<", H.n, "|G'|")], config.seed))
    dcfg = DenseConfig(eps=config.q, p=None, delta=0.5, eta=config.piece_eta, attempts=config.piece_attempts,
                       mode="relaxed", seed=config.seed)
    try:
        sub = embed_dense_rooted(core, H, list(range(H.n)), dcfg)
    except EmbeddingFailed as exc:
        raise EmbeddingFailed(exc.report.tagged("sparse/bipartite")) from None
    model = MinorModel(H, outcome.lift(sub))
    violations = verify_model(G, model)
    assert not violations, violations
    return SparseRun(model, trace)


def run_sparse(G: Graph, H: Graph, m: float, config: SparseConfig = SparseConfig()) -> SparseRun:
    """The full sparse pipeline with its stage trace; see :func:`embed_sparse`."""
    trace: dict = {"m": m, "mode": config.mode}
    kappa = None
    if config.check_connectivity or config.mode == "paper_faithful":
        need = math.ceil(config.kappa_multiple * H.n)
        kappa = vertex_connectivity(G, cutoff=need) if G.n >= 2 else 0
    hyp = _hypotheses(G, H, m, config, kappa)
    trace["hypotheses"] = hyp
    fails = []
    if kappa is not None and kappa < hyp["kappa_needed"]:
        fails.append(inequality(kappa, "<", hyp["kappa_needed"], "kappa"))
    if config.mode == "paper_faithful":
        if G.n < hyp["size_threshold"]:
            fails.append(inequality(G.n, "<", hyp["size_threshold"], "|G|"))
        if not hyp["edges_at_most_m_n"]:
            fails.append(inequality(G.num_edges, ">", m * G.n, "e(G)"))
        if hyp["min_edge_triangles"] <= m - 1:
            fails.append(inequality(hyp["min_edge_triangles"], "<=", m - 1, "triangles per edge"))
    if fails:
        raise EmbeddingFailed(FailureReport("sparse/precondition", "hypotheses fail", fails, config.seed, {"hypotheses": hyp}))

    try:
        found = find_dense_cores(G, m, config)
    except EmbeddingFailed as exc:
        raise EmbeddingFailed(exc.report.tagged("sparse")) from None
    if isinstance(found, BipartiteInstance):
        trace["branch"] = "bipartite"
        return _embed_via_core(G, H, found, m, config, trace)
    cores = found
    trace["branch"] = "cores"
    trace["cores"] = cores.stats

    failures = []
    for attempt, sd in enumerate(_seeds(config.seed, config.attempts)):
        s_plan, s_route, s_piece = _seeds(sd, 3)
        plan = partition_H(H, s_plan)
        try:
            pp = route_paths(G, cores, plan, config, seed=s_route)
            U, piece_info = _embed_pieces(G, H, cores, plan, pp, config, s_piece)
        except EmbeddingFailed as exc:
            failures.append(exc.report.tagged("sparse"))
            continue
        model = MinorModel(H, U, pp.roots)
        violations = verify_model(G, model)
        assert not violations, violations
        trace.update(
            attempt=attempt,
            plan={"parts": plan.parts, "pieces": plan.vertices,
                  "padded_degree": [2 * g.num_edges / g.n if g.n else 0.0 for g in plan.padded]},
            paths={"menger": pp.menger_paths, "max_core_usage": max(max(u) for u in pp.core_usage.values())},
            pieces=piece_info,
        )
        return SparseRun(model, trace)
    last = failures[-1]
    raise EmbeddingFailed(FailureReport(last.stage, last.reason, last.violated, config.seed,
                                        {**last.details, "attempts": config.attempts, "trace": trace}))


def _embed_pieces(G, H, cores, plan, pp, config, seed):
    path_vertices: set[int] = set()
    for p in pp.paths.values():
        path_vertices.update(p)
    U = [set([pp.roots[v]]) for v in range(H.n)]
    for (v, k), p in pp.paths.items():
        U[v].update(p[:-1])
    info = []
    Rstar = 5 * H.n
    for k in range(N_PIECES):
        T = cores.T[1 + k]
        roots_k = pp.piece_roots[k]
        X = (path_vertices & set(T)) - set(roots_k)
        if len(X) > config.path_budget * Rstar:
            raise AssertionError(f"|X| = {len(X)} > {config.path_budget * Rstar}")
        keep = sorted(set(T) - X)
        Gp, order = G.induced_subgraph(keep)
        local = {x: i for i, x in enumerate(order)}
        Hk = plan.padded[k]
        rec = {"piece": k, "X": len(X), "host": Gp.n, "H": Hk.n}
        if Hk.n:
            dcfg = DenseConfig(eps=config.piece_eps, delta=config.piece_delta, eta=config.piece_eta,
                               attempts=config.piece_attempts, mode="relaxed", seed=seed + k)
            try:
                sub = embed_dense_rooted(Gp, Hk, [local[r] for r in roots_k], dcfg)
            except EmbeddingFailed as exc:
                raise EmbeddingFailed(exc.report.tagged(f"piece{k}")) from None
            for i, v in enumerate(plan.vertices[k]):
                U[v].update(order[x] for x in sub.branch_sets[i])
        info.append(rec)
    return [frozenset(u) for u in U], info


def embed_sparse(G: Graph, H: Graph, m: float, config: SparseConfig = SparseConfig()) -> MinorModel:
    """An H minor of a sparse host whose edges lie in many triangles, rooted in ``T_0``.

    Cores, piece plan, path routing, per-piece rooted dense embeddings in
    ``G[T^k - X]`` and the union of pieces and paths.  Raises
    :class:`EmbeddingFailed` with a stage-tagged report; every returned
    model passes :func:`verify_model`.
    """
    return run_sparse(G, H, m, config).model
