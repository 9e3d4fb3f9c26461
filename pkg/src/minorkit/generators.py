"""Graph families used as hosts and targets.

Random families take a mandatory integer seed and are reproducible: the same
arguments always give the same edge set.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .graph import Graph

__all__ = [
    "complete",
    "complete_bipartite",
    "cycle",
    "generate",
    "glued_cliques",
    "gnp",
    "hypercube",
    "path",
    "petersen",
    "random_avg_degree",
]


def _require_seed(seed):
    if seed is None or isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError("random graph families need an explicit integer seed")


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p)."""
    _require_seed(seed)
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_matrix(upper | upper.T)


def random_avg_degree(t: int, d: float, seed: int) -> Graph:
    """Uniform graph on ``t`` vertices with ``floor(t*d/2)`` edges."""
    _require_seed(seed)
    if t < 1:
        raise ValueError("t must be positive")
    if d < 0 or d > t - 1:
        raise ValueError(f"average degree {d} not achievable on {t} vertices")
    m = math.floor(t * d / 2)
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(t), 2))
    pick = rng.choice(len(pairs), size=m, replace=False)
    return Graph(t, (pairs[i] for i in sorted(pick)))


def complete(t: int) -> Graph:
    if t < 0:
        raise ValueError("t must be non-negative")
    return Graph(t, combinations(range(t), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 0 or b < 0:
        raise ValueError("part sizes must be non-negative")
    return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def hypercube(k: int) -> Graph:
    if k < 0:
        raise ValueError("dimension must be non-negative")
    n = 1 << k
    return Graph(n, ((v, v ^ (1 << i)) for v in range(n) for i in range(k) if v < v ^ (1 << i)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("a path needs at least 1 vertex")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def glued_cliques(n_cliques: int, clique_size: int, glue_matchings: int, seed: int) -> Graph:
    """Disjoint cliques tied together by random cross-clique perfect matchings.

    Clique ``i`` occupies vertices ``i*clique_size .. (i+1)*clique_size-1``.
    Each of the ``glue_matchings`` rounds adds a uniformly random perfect
    matching on all vertices that never pairs two vertices of one clique, so
    every vertex gets exactly that many glue edges.
    """
    _require_seed(seed)
    if n_cliques < 2 or clique_size < 2:
        raise ValueError("need at least two cliques of size two")
    n = n_cliques * clique_size
    if n % 2:
        raise ValueError("total vertex count must be even for perfect matchings")
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for c in range(n_cliques):
        block = range(c * clique_size, (c + 1) * clique_size)
        for u in block:
            adj[u].update(w for w in block if w != u)
    for _ in range(glue_matchings):
        perm = rng.permutation(n).tolist()
        pairs = [[perm[i], perm[i + 1]] for i in range(0, n, 2)]

        def bad(p):
            return p[0] // clique_size == p[1] // clique_size or p[1] in adj[p[0]]

        for _sweep in range(10_000):
            faulty = [i for i, p in enumerate(pairs) if bad(p)]
            if not faulty:
                break
            for i in faulty:
                j = int(rng.integers(len(pairs)))
                if j == i:
                    continue
                (x, y), (a, b) = pairs[i], pairs[j]
                if not bad([x, b]) and not bad([a, y]):
                    pairs[i], pairs[j] = [x, b], [a, y]
        else:
            raise RuntimeError("could not draw a cross-clique matching")
        for x, y in pairs:
            adj[x].add(y)
            adj[y].add(x)
    return Graph._from_adjacency(adj)


_FAMILIES = {
    "gnp": (gnp, ("n", "p", "seed")),
    "complete": (complete, ("t",)),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
    "hypercube": (hypercube, ("k",)),
    "random_avg_degree": (random_avg_degree, ("t", "d", "seed")),
    "cycle": (cycle, ("n",)),
    "path": (path, ("n",)),
    "petersen": (petersen, ()),
    "glued_cliques": (glued_cliques, ("n_cliques", "clique_size", "glue_matchings", "seed")),
}


def generate(spec: dict) -> Graph:
    """Build a graph from a spec such as ``{"family": "gnp", "n": 100, "p": 0.5, "seed": 3}``."""
    spec = dict(spec)
    family = spec.pop("family", None)
    if family not in _FAMILIES:
        raise ValueError(f"unknown graph family {family!r}")
    fn, params = _FAMILIES[family]
    missing = [p for p in params if p not in spec]
    extra = [k for k in spec if k not in params]
    if missing or extra:
        raise ValueError(f"{family}: missing {missing}, unexpected {extra}")
    return fn(**{p: spec[p] for p in params})
