"""Immutable simple undirected graphs and the three minor operations.

Vertices are always ``0..n-1``.  Every operation that changes the vertex set
returns a fresh graph with recompacted ids together with a renaming table
``renaming[old] -> new`` (``None`` for deleted vertices).
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import NamedTuple, TextIO

import numpy as np

__all__ = [
    "Graph",
    "GraphStats",
    "MinorOp",
    "apply_minor_op",
    "edge_triangle_count",
    "graph_stats",
    "neighborhood_set",
    "read_edge_list",
    "write_edge_list",
    "parse_edge_list",
    "format_edge_list",
]


class Graph:
    """A finite simple undirected graph on vertices ``0..n-1``.

    Instances are immutable; adjacency is held as a tuple of frozensets and
    a boolean adjacency matrix is built lazily for vectorised queries.
    """

    __slots__ = ("_n", "_adj", "_m", "_matrix")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if v in adj[u]:
                raise ValueError(f"parallel edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self._n = n
        self._adj = tuple(frozenset(a) for a in adj)
        self._m = m
        self._matrix = None

    @classmethod
    def _from_adjacency(cls, adj: Iterable[Iterable[int]]) -> "Graph":
        # Trusted constructor: caller guarantees symmetry and no loops.
        g = cls.__new__(cls)
        g._adj = tuple(frozenset(a) for a in adj)
        g._n = len(g._adj)
        g._m = sum(len(a) for a in g._adj) // 2
        g._matrix = None
        return g

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Graph":
        a = np.asarray(matrix, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if a.diagonal().any():
            raise ValueError("adjacency matrix has self-loops")
        if not (a == a.T).all():
            raise ValueError("adjacency matrix is not symmetric")
        g = cls._from_adjacency(np.flatnonzero(row).tolist() for row in a)
        g._matrix = a.copy()
        g._matrix.flags.writeable = False
        return g

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self._n

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=self._n)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self._n and v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nbrs in enumerate(self._adj):
            for v in sorted(nbrs):
                if u < v:
                    yield (u, v)

    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` int array of edges with ``u < v``."""
        iu, iv = np.nonzero(np.triu(self.matrix(), 1))
        return np.stack([iu, iv], axis=1).astype(np.int64)

    def matrix(self) -> np.ndarray:
        """Read-only boolean adjacency matrix (cached)."""
        if self._matrix is None:
            a = np.zeros((self._n, self._n), dtype=bool)
            for u, nbrs in enumerate(self._adj):
                if nbrs:
                    a[u, list(nbrs)] = True
            a.flags.writeable = False
            self._matrix = a
        return self._matrix

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Return ``(G[X], order)`` where ``order[i]`` is the host id of new vertex ``i``.

        New ids follow ascending host ids.
        """
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        adj = [[index[w] for w in self._adj[v] if w in index] for v in order]
        return Graph._from_adjacency(adj), order

    def without_vertices(self, removed: Iterable[int]) -> tuple["Graph", list[int]]:
        removed = set(removed)
        return self.induced_subgraph(v for v in range(self._n) if v not in removed)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        adj = [set(a) for a in self._adj]
        for u, v in extra:
            if u == v or not (0 <= u < self._n and 0 <= v < self._n):
                raise ValueError(f"invalid edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
        return Graph._from_adjacency(adj)

    def is_connected(self, vertices: Iterable[int] | None = None) -> bool:
        """Whether ``G`` (or ``G[vertices]``) is connected; the empty set is not."""
        allowed = set(range(self._n)) if vertices is None else set(vertices)
        if not allowed:
            return False
        start = next(iter(allowed))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(allowed)

    def components(self, vertices: Iterable[int] | None = None) -> list[set[int]]:
        allowed = set(range(self._n)) if vertices is None else set(vertices)
        comps = []
        seen: set[int] = set()
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w in allowed and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, e={self._m})"


class GraphStats(NamedTuple):
    n: int
    e: int
    density: float
    avg_degree: float
    min_degree: int


def graph_stats(G: Graph) -> GraphStats:
    n, e = G.n, G.num_edges
    if n < 1:
        raise ValueError("graph_stats needs at least one vertex")
    pairs = n * (n - 1) // 2
    density = e / pairs if pairs else 0.0
    min_degree = int(G.degrees().min())
    return GraphStats(n, e, density, 2 * e / n, min_degree)


def neighborhood_set(G: Graph, X: Iterable[int]) -> set[int]:
    """Vertices outside ``X`` with at least one neighbour in ``X``."""
    X = set(X)
    out: set[int] = set()
    for u in X:
        out |= G.neighbors(u)
    return out - X


def edge_triangle_count(G: Graph, u: int, v: int) -> int:
    if not G.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return len(G.neighbors(u) & G.neighbors(v))


@dataclass(frozen=True)
class MinorOp:
    """One of ``delete_vertex`` (``v`` only), ``delete_edge`` or ``contract_edge``.

    For contractions the merged vertex inherits the position of ``u``.
    """

    kind: str
    u: int
    v: int | None = None

    KINDS = ("delete_vertex", "delete_edge", "contract_edge")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown minor operation {self.kind!r}")
        if (self.kind == "delete_vertex") != (self.v is None):
            raise ValueError(f"{self.kind} takes {'one vertex' if self.kind == 'delete_vertex' else 'two vertices'}")

    def as_tuple(self) -> tuple:
        return (self.kind, self.u) if self.v is None else (self.kind, self.u, self.v)


def apply_minor_op(G: Graph, op: MinorOp) -> tuple[Graph, list[int | None]]:
    """Apply one minor operation; returns the new graph and ``renaming[old] -> new``."""
    n = G.n
    if op.kind == "delete_edge":
        u, v = op.u, op.v
        if not G.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        adj = [set(a) for a in G._adj]
        adj[u].discard(v)
        adj[v].discard(u)
        return Graph._from_adjacency(adj), list(range(n))

    if op.kind == "delete_vertex":
        gone = op.u
        if not 0 <= gone < n:
            raise ValueError(f"vertex {gone} does not exist")
        keep_into = None
    else:
        u, gone = op.u, op.v
        if not G.has_edge(u, gone):
            raise ValueError(f"({u}, {gone}) is not an edge")
        keep_into = u

    renaming: list[int | None] = [None] * n
    nxt = 0
    for x in range(n):
        if x != gone:
            renaming[x] = nxt
            nxt += 1
    if keep_into is not None:
        renaming[gone] = renaming[keep_into]

    adj: list[set[int]] = [set() for _ in range(n - 1)]
    for x in range(n):
        if x == gone:
            continue
        rx = renaming[x]
        for y in G._adj[x]:
            ry = renaming[y]
            if ry is not None and ry != rx:
                adj[rx].add(ry)
    if keep_into is not None:
        ru = renaming[keep_into]
        for y in G._adj[gone]:
            ry = renaming[y]
            if ry != ru:
                adj[ru].add(ry)
                adj[ry].add(ru)
    return Graph._from_adjacency(adj), renaming


def parse_edge_list(text: str) -> Graph:
    """Parse the ``"n m"`` header + ``m`` lines of ``"u v"`` interchange format."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise ValueError("edge list must start with a 'n m' header")
    n, m = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for i, parts in enumerate(body, start=2):
        if len(parts) != 2:
            raise ValueError(f"line {i}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise ValueError(f"line {i}: edges must be written with u < v")
        edges.append((u, v))
    return Graph(n, edges)


def format_edge_list(G: Graph) -> str:
    out = [f"{G.n} {G.num_edges}"]
    out.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(out) + "\n"


def read_edge_list(fh: TextIO | str) -> Graph:
    if isinstance(fh, str):
        with open(fh) as f:
            return parse_edge_list(f.read())
    return parse_edge_list(fh.read())


def write_edge_list(G: Graph, fh: TextIO | str) -> None:
    if isinstance(fh, str):
        with open(fh, "w") as f:
            f.write(format_edge_list(G))
    else:
        fh.write(format_edge_list(G))
