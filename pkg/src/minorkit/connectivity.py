"""Vertex connectivity, Menger paths and greedy short disjoint paths.

Max-flow runs on the standard vertex-split network: vertex ``v`` becomes an
arc ``v_in -> v_out`` of capacity 1, each edge ``uv`` the two arcs
``u_out -> v_in`` and ``v_out -> u_in``.  The flow solver is scipy's Dinic
implementation; path decomposition and cut extraction are done here.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Graph

__all__ = [
    "PathList",
    "disjoint_paths_between_sets",
    "disjoint_short_paths",
    "local_vertex_connectivity",
    "minimum_vertex_cut",
    "shortest_path",
    "verify_paths",
    "vertex_connectivity",
]


class _SplitNetwork:
    """Vertex-split flow network with two spare nodes for a super source/sink."""

    def __init__(self, G: Graph, blocked: Iterable[int] = ()):
        n = G.n
        self.n = n
        self.G = G
        self.source = 2 * n
        self.sink = 2 * n + 1
        blocked = set(blocked)
        edges = G.edge_array() if G.num_edges else np.zeros((0, 2), dtype=np.int64)
        keep = np.array([v not in blocked for v in range(n)], dtype=bool)
        if len(edges):
            ok = keep[edges[:, 0]] & keep[edges[:, 1]]
            edges = edges[ok]
        verts = np.flatnonzero(keep)
        self._rows = [verts, edges[:, 0] + n, edges[:, 1] + n]
        self._cols = [verts + n, edges[:, 1], edges[:, 0]]
        # edge arcs are uncuttable so minimum cuts consist of vertex arcs only
        big = max(n, 1)
        self._data = [np.ones(len(verts), np.int32), np.full(2 * len(edges), big, np.int32)]
        self._base = None
        self._capped = None

    def matrix(self, extra_rows=(), extra_cols=(), extra_caps=None) -> csr_matrix:
        rows = np.concatenate(self._rows + [np.asarray(extra_rows, dtype=np.int64)])
        cols = np.concatenate(self._cols + [np.asarray(extra_cols, dtype=np.int64)])
        caps = np.ones(len(extra_rows), np.int32) if extra_caps is None else np.asarray(extra_caps, np.int32)
        data = np.concatenate(self._data + [caps])
        size = 2 * self.n + 2
        return csr_matrix((data, (rows, cols)), shape=(size, size))

    def base(self) -> csr_matrix:
        if self._base is None:
            self._base = self.matrix()
        return self._base

    def capped(self) -> tuple[csr_matrix, np.ndarray]:
        """Base matrix plus a zero-capacity arc ``source -> v_out`` per vertex, and their data slots."""
        if self._capped is None:
            n = self.n
            mat = self.matrix([self.source] * n, [self.out_node(v) for v in range(n)], np.zeros(n, np.int32))
            mat.sort_indices()
            lo, hi = mat.indptr[self.source], mat.indptr[self.source + 1]
            slots = lo + np.searchsorted(mat.indices[lo:hi], np.arange(n) + n)
            self._capped = (mat, slots)
        return self._capped

    def out_node(self, v: int) -> int:
        return v + self.n

    def in_node(self, v: int) -> int:
        return v


def local_vertex_connectivity(G: Graph, s: int, t: int, blocked: Iterable[int] = ()) -> int:
    """Maximum number of internally disjoint ``s``–``t`` paths (``s``, ``t`` non-adjacent)."""
    if G.has_edge(s, t):
        raise ValueError("local connectivity is only defined for non-adjacent pairs")
    net = _SplitNetwork(G, blocked)
    return int(_pair_flow(net, s, t).flow_value)


def _pair_flow(net: _SplitNetwork, s: int, t: int):
    return maximum_flow(net.base(), net.out_node(s), net.in_node(t), method="dinic")


def _capped_pair_value(net: _SplitNetwork, s: int, t: int, cap: int) -> int:
    # a source arc of capacity ``cap`` lets Dinic stop once ``cap`` units flow;
    # the arc is patched into a cached matrix holding zero-capacity source arcs
    mat, slots = net.capped()
    pos = slots[s]
    mat.data[pos] = cap
    try:
        return int(maximum_flow(mat, net.source, net.in_node(t), method="dinic").flow_value)
    finally:
        mat.data[pos] = 0


def _candidate_pairs(G: Graph):
    """Pairs whose local connectivities determine kappa (Esfahanian-Hakimi)."""
    deg = G.degrees()
    v = int(np.argmin(deg))
    nbrs = sorted(G.neighbors(v))
    for w in range(G.n):
        if w != v and not G.has_edge(v, w):
            yield v, w
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1 :]:
            if not G.has_edge(x, y):
                yield x, y


def vertex_connectivity(G: Graph, cutoff: int | None = None) -> int:
    """Exact vertex connectivity; ``kappa(K_n) = n - 1`` and disconnected graphs give 0.

    With ``cutoff`` the search stops as soon as ``kappa >= cutoff`` is certain
    and returns ``min(kappa, cutoff)``.
    """
    n = G.n
    if n < 2:
        raise ValueError("vertex connectivity needs at least two vertices")
    if not G.is_connected():
        return 0
    best = int(G.degrees().min())
    if cutoff is not None:
        best = min(best, cutoff)
    if G.num_edges == n * (n - 1) // 2:
        return best
    net = _SplitNetwork(G)
    for x, y in _candidate_pairs(G):
        # common neighbours already give that many disjoint x-y paths
        if len(G.neighbors(x) & G.neighbors(y)) >= best:
            continue
        # only min(best, flow) matters, so the flow may stop at ``best``
        best = min(best, _capped_pair_value(net, x, y, best))
        if best <= 1:
            break
    return best


def _residual_reachable(flow_result, cap: csr_matrix, start: int) -> np.ndarray:
    residual = (cap - flow_result.flow).tocsr()
    residual.eliminate_zeros()
    seen = np.zeros(cap.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    indptr, indices, data = residual.indptr, residual.indices, residual.data
    while queue:
        x = queue.popleft()
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if data[k] > 0 and not seen[y]:
                seen[y] = True
                queue.append(y)
    return seen


def minimum_vertex_cut(G: Graph) -> set[int] | None:
    """A minimum separating vertex set, or ``None`` for complete graphs.

    Disconnected graphs return the empty set.
    """
    n = G.n
    if n < 2:
        raise ValueError("vertex cuts need at least two vertices")
    if G.num_edges == n * (n - 1) // 2:
        return None
    if not G.is_connected():
        return set()
    net = _SplitNetwork(G)
    deg = G.degrees()
    v = int(np.argmin(deg))
    best_val = int(deg[v]) + 1
    best_pair = None
    for x, y in _candidate_pairs(G):
        if len(G.neighbors(x) & G.neighbors(y)) >= best_val:
            continue
        val = int(_pair_flow(net, x, y).flow_value)
        if val < best_val:
            best_val, best_pair = val, (x, y)
    if best_pair is None:
        # deg[v] + 1 > kappa always, so some pair must have been evaluated
        raise AssertionError("no separating pair found in a non-complete graph")
    x, y = best_pair
    cap = net.base()
    res = _pair_flow(net, x, y)
    seen = _residual_reachable(res, cap, net.out_node(x))
    cut = {w for w in range(n) if seen[net.in_node(w)] and not seen[net.out_node(w)]}
    assert len(cut) == best_val
    return cut


def _decompose(flow: csr_matrix, start: int) -> list[list[int]]:
    """Split a unit flow leaving ``start`` into node walks (cycles never reached)."""
    f = flow.tocsr()
    succ: dict[int, list[int]] = {}
    coo = f.tocoo()
    for r, c, val in zip(coo.row, coo.col, coo.data):
        for _ in range(int(val)):
            succ.setdefault(int(r), []).append(int(c))
    walks = []
    for first in list(succ.get(start, [])):
        walk = [first]
        cur = first
        while cur in succ and succ[cur]:
            cur = succ[cur].pop()
            walk.append(cur)
        walks.append(walk)
    return walks


def disjoint_paths_between_sets(
    G: Graph,
    sources: Iterable[int],
    sinks: Iterable[int],
    blocked: Iterable[int] = (),
) -> list[list[int]]:
    """Maximum family of vertex-disjoint paths from ``sources`` to ``sinks`` (Menger).

    Each returned path starts in ``sources``, ends in ``sinks`` and meets the
    two sets only at its ends.  Paths avoid ``blocked`` entirely.
    """
    sources, sinks = set(sources), set(sinks)
    blocked = set(blocked)
    net = _SplitNetwork(G, blocked)
    n = G.n
    # the source/sink set members may only be path ends
    srcs = sorted(sources - blocked)
    snks = sorted(sinks - blocked)
    rows = [net.source] * len(srcs) + [net.out_node(v) for v in snks]
    cols = [net.in_node(v) for v in srcs] + [net.sink] * len(snks)
    cap = net.matrix(rows, cols)
    res = maximum_flow(cap, net.source, net.sink, method="dinic")
    paths = []
    for walk in _decompose(res.flow, net.source):
        verts = [x for x in walk if x < n]
        paths.append(_trim_to_sets(verts, sources, sinks))
    return sorted(paths)


def _trim_to_sets(path: list[int], sources: set[int], sinks: set[int]) -> list[int]:
    # keep the final segment from the last source vertex to the first sink after it
    start = max(i for i, x in enumerate(path) if x in sources)
    rest = path[start:]
    end = next(i for i, x in enumerate(rest) if x in sinks)
    return rest[: end + 1]


def shortest_path(
    G: Graph,
    starts: Iterable[int],
    targets: Iterable[int],
    allowed_internal=None,
    max_len: int | None = None,
) -> list[int] | None:
    """BFS for a shortest path from any start to any target.

    Internal vertices must satisfy ``allowed_internal`` (a set or predicate);
    ``max_len`` bounds the number of edges.  A vertex in both sets gives a
    one-vertex path.
    """
    starts = list(dict.fromkeys(starts))
    targets = set(targets)
    if allowed_internal is None:
        ok = lambda x: True  # noqa: E731
    elif callable(allowed_internal):
        ok = allowed_internal
    else:
        allowed_internal = set(allowed_internal)
        ok = allowed_internal.__contains__
    for s in starts:
        if s in targets:
            return [s]
    parent: dict[int, int | None] = {s: None for s in starts}
    frontier = list(starts)
    depth = 0
    while frontier and (max_len is None or depth < max_len):
        depth += 1
        nxt = []
        for x in frontier:
            for y in sorted(G.neighbors(x)):
                if y in parent:
                    continue
                if y in targets:
                    parent[y] = x
                    path = [y]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if ok(y):
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    return None


@dataclass
class PathList:
    """Paths between two fixed endpoints, each stored as a vertex sequence."""

    u: int
    v: int
    paths: list[list[int]] = field(default_factory=list)
    want: int = 0
    internally_disjoint: bool = True

    @property
    def shortfall(self) -> bool:
        return len(self.paths) < self.want

    def __len__(self) -> int:
        return len(self.paths)


def disjoint_short_paths(
    G: Graph,
    u: int,
    v: int,
    max_len: int,
    want: int,
    forbidden: Iterable[int] = (),
) -> PathList:
    """Greedy internally disjoint ``u``–``v`` paths of at most ``max_len`` edges.

    Repeats: take a shortest admissible path, freeze its internal vertices.
    The count is a lower bound on the true maximum.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    forbidden = set(forbidden)
    if u in forbidden or v in forbidden:
        raise ValueError("endpoints may not be forbidden")
    used = set(forbidden)
    out = PathList(u, v, want=want)
    if want <= 0:
        return out
    if G.has_edge(u, v) and max_len >= 1:
        out.paths.append([u, v])
    while len(out.paths) < want:
        # direct edge already taken; search from u's neighbours instead
        starts = [w for w in sorted(G.neighbors(u)) if w not in used and w != v]
        if not starts or max_len < 2:
            break
        tail = shortest_path(G, starts, {v}, lambda x: x not in used and x != u, max_len - 1)
        if tail is None:
            break
        out.paths.append([u] + tail)
        used.update(tail[:-1])
    return out


def verify_paths(
    G: Graph,
    paths: Sequence[Sequence[int]],
    *,
    ends: tuple[int, int] | None = None,
    max_len: int | None = None,
    forbidden: Iterable[int] = (),
    internally_disjoint: bool = True,
    vertex_disjoint: bool = False,
) -> list[str]:
    """Independent checker for path families; returns a list of problems (empty = ok)."""
    problems = []
    forbidden = set(forbidden)
    seen_internal: dict[int, int] = {}
    seen_all: dict[int, int] = {}
    for i, p in enumerate(paths):
        if len(p) == 0:
            problems.append(f"path {i} is empty")
            continue
        if len(set(p)) != len(p):
            problems.append(f"path {i} repeats a vertex")
        for a, b in zip(p, p[1:]):
            if not G.has_edge(a, b):
                problems.append(f"path {i} uses non-edge ({a}, {b})")
        if ends is not None and (p[0], p[-1]) != tuple(ends):
            problems.append(f"path {i} runs {p[0]}..{p[-1]}, expected {ends[0]}..{ends[1]}")
        if max_len is not None and len(p) - 1 > max_len:
            problems.append(f"path {i} has length {len(p) - 1} > {max_len}")
        for x in p[1:-1]:
            if x in forbidden:
                problems.append(f"path {i} passes forbidden vertex {x}")
            if internally_disjoint and x in seen_internal:
                problems.append(f"paths {seen_internal[x]} and {i} share internal vertex {x}")
            seen_internal[x] = i
        if vertex_disjoint:
            for x in p:
                if x in seen_all:
                    problems.append(f"paths {seen_all[x]} and {i} share vertex {x}")
                seen_all[x] = i
    if internally_disjoint and ends is not None:
        direct = sum(1 for p in paths if len(p) == 2)
        if direct > 1:
            problems.append("the direct edge is used more than once")
    return problems
