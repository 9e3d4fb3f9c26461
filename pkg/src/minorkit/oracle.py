"""Minor models, their verification, and exact minor search for small graphs."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass

from .graph import Graph

__all__ = [
    "BudgetExceeded",
    "MODEL_SCHEMA",
    "MinorModel",
    "Violation",
    "has_minor_exact",
    "model_from_dict",
    "model_to_dict",
    "verify_model",
]

MODEL_SCHEMA = "minorkit.model/1"


@dataclass(frozen=True)
class MinorModel:
    """Branch sets ``branch_sets[v]`` in a host graph for each vertex ``v`` of ``target``."""

    target: Graph
    branch_sets: tuple[frozenset[int], ...]
    roots: tuple[int, ...] | None = None

    def __init__(self, target: Graph, branch_sets: Sequence, roots: Sequence[int] | None = None):
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "branch_sets", tuple(frozenset(int(x) for x in b) for b in branch_sets))
        object.__setattr__(self, "roots", None if roots is None else tuple(int(r) for r in roots))
        if len(self.branch_sets) != target.n:
            raise ValueError(f"{len(self.branch_sets)} branch sets for a target on {target.n} vertices")
        if self.roots is not None and len(self.roots) != target.n:
            raise ValueError("one root per target vertex is required")

    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.branch_sets) if self.branch_sets else frozenset()

    def to_dict(self) -> dict:
        return model_to_dict(self)


@dataclass(frozen=True)
class Violation:
    kind: str  # empty_set | overlap | disconnected_branch | missing_edge | root_outside
    witness: tuple

    def __str__(self) -> str:
        return f"{self.kind}: {self.witness}"


def verify_model(G: Graph, model: MinorModel) -> list[Violation]:
    """Check every defining condition of a (rooted) minor model.

    Returns all violations found; an empty list means the model is valid.
    """
    for b in model.branch_sets:
        for x in b:
            if not 0 <= x < G.n:
                raise ValueError(f"branch-set vertex {x} outside host range 0..{G.n - 1}")
    if model.roots is not None:
        for r in model.roots:
            if not 0 <= r < G.n:
                raise ValueError(f"root {r} outside host range")

    out: list[Violation] = []
    owner: dict[int, int] = {}
    for v, b in enumerate(model.branch_sets):
        if not b:
            out.append(Violation("empty_set", (v,)))
        for x in sorted(b):
            if x in owner:
                out.append(Violation("overlap", (owner[x], v, x)))
            else:
                owner[x] = v
    for v, b in enumerate(model.branch_sets):
        if b and not G.is_connected(b):
            comps = G.components(b)
            out.append(Violation("disconnected_branch", (v, tuple(sorted(min(c) for c in comps)))))
    for v, w in model.target.edges():
        bv, bw = model.branch_sets[v], model.branch_sets[w]
        if not any(G.neighbors(x) & bw for x in bv):
            out.append(Violation("missing_edge", (v, w)))
    if model.roots is not None:
        for v, r in enumerate(model.roots):
            if r not in model.branch_sets[v]:
                out.append(Violation("root_outside", (v, r)))
    return out


def model_to_dict(model: MinorModel) -> dict:
    doc = {
        "schema": MODEL_SCHEMA,
        "H": {"n": model.target.n, "edges": [list(e) for e in model.target.edges()]},
        "branch_sets": [sorted(b) for b in model.branch_sets],
    }
    if model.roots is not None:
        doc["roots"] = list(model.roots)
    return doc


def model_from_dict(doc: dict) -> MinorModel:
    if doc.get("schema") != MODEL_SCHEMA:
        raise ValueError(f"unsupported model schema {doc.get('schema')!r}")
    H = Graph(doc["H"]["n"], map(tuple, doc["H"]["edges"]))
    return MinorModel(H, doc["branch_sets"], doc.get("roots"))


def dumps_model(model: MinorModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


class BudgetExceeded(RuntimeError):
    """The exact search ran out of its node budget; the answer is unknown."""

    def __init__(self, nodes: int):
        super().__init__(f"minor search exhausted its budget after {nodes} nodes")
        self.nodes = nodes


def _cycle_rank(G: Graph) -> int:
    return G.num_edges - G.n + len(G.components())


def has_minor_exact(
    G: Graph,
    H: Graph,
    roots: Sequence[int] | None = None,
    budget: int = 2_000_000,
) -> MinorModel | None:
    """Decide ``G ≻ H`` (optionally rooted) by exhaustive branch-set search.

    Returns a verified model, or ``None`` when no model exists.  Raises
    :class:`BudgetExceeded` when more than ``budget`` candidate branch sets
    were examined.  ``H``'s labelling is respected.
    """
    if roots is not None:
        roots = [int(r) for r in roots]
        if len(roots) != H.n:
            raise ValueError("one root per target vertex is required")
        if len(set(roots)) != len(roots):
            return None
        if any(not 0 <= r < G.n for r in roots):
            raise ValueError("root outside host range")
    if H.n == 0:
        return MinorModel(H, [], [] if roots is not None else None)
    if H.n > G.n or H.num_edges > G.num_edges or _cycle_rank(H) > _cycle_rank(G):
        return None
    R, ids, origin = _reduce(G, H, roots)
    if H.n > R.n or H.num_edges > R.num_edges:
        return None
    index = {x: i for i, x in enumerate(ids)}
    search = _Search(R, H, None if roots is None else [index[r] for r in roots], budget)
    sets = search.run()
    if sets is None:
        return None
    sets = [frozenset().union(*(origin[x] for x in U)) for U in sets]
    model = MinorModel(H, sets, roots)
    assert not verify_model(G, model)
    return model


def _reduce(G: Graph, H: Graph, roots) -> tuple[Graph, list[int], list[frozenset[int]]]:
    """Shrink ``G`` without changing whether it has an ``H`` minor.

    With ``delta(H) >= 2`` a non-root vertex of degree at most one can only
    be a leaf of some branch set, so it is deleted.  With ``delta(H) >= 3``
    a non-root vertex of degree two is contracted into a neighbour.  Returns
    the reduced graph, the surviving host ids, and per reduced vertex the host
    vertices it stands for.
    """
    dmin = min((H.degree(v) for v in range(H.n)), default=0)
    adj = {x: set(G.neighbors(x)) for x in range(G.n)}
    origin = {x: {x} for x in range(G.n)}
    keep = set(roots or ())
    queue = list(range(G.n))
    while queue and dmin >= 2:
        v = queue.pop()
        if v not in adj or v in keep:
            continue
        nb = adj[v]
        if len(nb) <= 1 or (dmin >= 3 and len(nb) == 2):
            del adj[v]
            for u in nb:
                adj[u].discard(v)
            if len(nb) == 2:
                u, w = sorted(nb)
                origin[u] |= origin[v]
                adj[u].add(w)
                adj[w].add(u)
            del origin[v]
            queue.extend(nb)
    ids = sorted(adj)
    index = {x: i for i, x in enumerate(ids)}
    R = Graph(len(ids), ((index[a], index[b]) for a in ids for b in adj[a] if a < b))
    return R, ids, [frozenset(origin[x]) for x in ids]


class _Search:
    def __init__(self, G: Graph, H: Graph, roots, budget):
        self.G, self.H, self.roots, self.budget = G, H, roots, budget
        self.nodes = 0
        self.adj = [G.neighbors(x) for x in range(G.n)]
        self.order = sorted(range(H.n), key=lambda v: (-H.degree(v), v))
        degs = sorted((G.degree(x) for x in range(G.n)), reverse=True)
        prefix = [0]
        for d in degs:
            prefix.append(prefix[-1] + d)
        smin = []
        for v in range(H.n):
            D = H.degree(v)
            s = next((s for s in range(1, G.n + 1) if prefix[s] - 2 * (s - 1) >= D), None)
            smin.append(s)
        self.smin = smin
        self.suffix = [0] * (H.n + 1)
        for i in range(H.n - 1, -1, -1):
            s = smin[self.order[i]]
            self.suffix[i] = None if (s is None or self.suffix[i + 1] is None) else s + self.suffix[i + 1]
        self.sets: list[set[int] | None] = [None] * H.n
        self.free = set(range(G.n))
        self.root_of = {} if roots is None else {r: v for v, r in enumerate(roots)}

    def run(self):
        if self.suffix[0] is None or self.suffix[0] > self.G.n:
            return None
        if self._place(0):
            return [frozenset(s) for s in self.sets]
        return None

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)

    def _connected_sets(self, anchor: int, size: int, allowed: set[int]):
        adj = self.adj

        def rec(sub, ext, excl):
            if len(sub) == size:
                yield sub
                return
            ext = list(ext)
            while ext:
                w = ext.pop()
                new = [u for u in adj[w] if u in allowed and u not in excl]
                yield from rec(sub | {w}, ext + new, excl | adj[w])

        start = [u for u in adj[anchor] if u in allowed]
        yield from rec(frozenset([anchor]), start, set(adj[anchor]) | {anchor})

    def _free_nbrs(self, U) -> set[int]:
        out = set()
        for x in U:
            out |= self.adj[x]
        return (out - set(U)) & self.free

    def _place(self, i: int) -> bool:
        H = self.H
        if i == H.n:
            return True
        v = self.order[i]
        placed = [w for w in H.neighbors(v) if self.sets[w] is not None]
        unplaced_count = H.degree(v) - len(placed)
        cap = len(self.free) - self.suffix[i + 1]
        lo = self.smin[v]
        if cap < lo:
            return False

        if self.roots is not None:
            r = self.roots[v]
            if r not in self.free:
                return False
            usable = {x for x in self.free if self.root_of.get(x, v) == v}
            anchors = [(r, usable - {r})]
        else:
            anchors = [(a, {x for x in self.free if x > a}) for a in sorted(self.free)]

        for size in range(lo, cap + 1):
            for anchor, allowed in anchors:
                for U in self._connected_sets(anchor, size, allowed):
                    self._tick()
                    if not all(any(self.adj[x] & self.sets[w] for x in U) for w in placed):
                        continue
                    if len(self._free_nbrs(U)) < unplaced_count:
                        continue
                    self.sets[v] = set(U)
                    self.free -= U
                    if self._placed_still_viable() and self._place(i + 1):
                        return True
                    self.free |= U
                    self.sets[v] = None
        return False

    def _placed_still_viable(self) -> bool:
        H = self.H
        for w, U in enumerate(self.sets):
            if U is None:
                continue
            pending = sum(1 for x in H.neighbors(w) if self.sets[x] is None)
            if pending and len(self._free_nbrs(U)) < pending:
                return False
        return True
