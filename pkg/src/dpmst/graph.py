"""Weighted-graph core: validation, union-find with member lists, exact MST.

Vertices are 1-based (1..n) and edge ids are 1-based (1..m) everywhere in the
public API; internal arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class GraphError(ValueError):
    """Base class for graph validation failures."""


class SelfLoopError(GraphError):
    pass


class EndpointError(GraphError):
    pass


class LengthMismatchError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class EdgeIndexError(GraphError):
    pass


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree as a set of 1-based edge ids (size n - 1)."""

    edge_ids: frozenset[int]

    def sorted_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.edge_ids))

    def __len__(self):
        return len(self.edge_ids)


class DisjointSets:
    """Union-find over vertices 1..n with per-component member lists.

    Union is by size; the smaller component's member list is appended to the
    larger one's, so scanning "the smaller side" (the caller's job) touches
    each vertex O(log n) times over a full run.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"need at least one vertex, got {n}")
        self.n = n
        self._parent = list(range(n + 1))
        self._size = [1] * (n + 1)
        self._members: list[list[int]] = [[v] for v in range(n + 1)]

    def _check_vertex(self, v: int):
        if not 1 <= v <= self.n:
            raise EndpointError(f"vertex {v} out of range [1, {self.n}]")

    def find(self, v: int) -> int:
        parent = self._parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def merge(self, u: int, v: int) -> bool:
        """Merge the components of u and v; False if already merged."""
        self._check_vertex(u)
        self._check_vertex(v)
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        if self._size[ru] < self._size[rv]:
            ru, rv = rv, ru
        # ru is the larger root; rv's members fold into it
        self._parent[rv] = ru
        self._size[ru] += self._size[rv]
        self._members[ru].extend(self._members[rv])
        self._members[rv] = []
        return True

    def size(self, v: int) -> int:
        self._check_vertex(v)
        return self._size[self.find(v)]

    def members(self, v: int) -> list[int]:
        """Live view of v's component member list; copy before mutating the structure."""
        self._check_vertex(v)
        return self._members[self.find(v)]

    def components(self) -> list[list[int]]:
        return [sorted(self._members[r]) for r in range(1, self.n + 1)
                if self._parent[r] == r]


class WeightedGraph:
    """Public topology (n vertices, m indexed edges) plus a private weight vector.

    Connectivity is validated eagerly; mechanisms assume it. Immutable after
    construction.
    """

    def __init__(self, n, edges, weights, delta_inf: float = 1.0):
        if n < 1:
            raise GraphError(f"need at least one vertex, got {n}")
        if delta_inf <= 0:
            raise GraphError(f"delta_inf must be positive, got {delta_inf}")
        edges = [(int(u), int(v)) for u, v in edges]
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1 or len(weights) != len(edges):
            raise LengthMismatchError(
                f"{len(edges)} edges but {weights.size} weights")
        for u, v in edges:
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise EndpointError(f"edge ({u}, {v}) outside [1, {n}]")
        if not _connected(n, edges):
            raise DisconnectedError(f"graph on {n} vertices is not connected")
        self.n = int(n)
        self.edges = edges
        self.weights = weights.copy()
        self.weights.flags.writeable = False
        self.delta_inf = float(delta_inf)
        if edges:
            arr = np.asarray(edges, dtype=np.int64)
            self.u_arr, self.v_arr = arr[:, 0], arr[:, 1]
        else:
            self.u_arr = np.zeros(0, dtype=np.int64)
            self.v_arr = np.zeros(0, dtype=np.int64)
        self._incident = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def incident(self) -> list[list[int]]:
        """0-based edge indices incident to each vertex (index 0 unused)."""
        if self._incident is None:
            inc: list[list[int]] = [[] for _ in range(self.n + 1)]
            for i, (u, v) in enumerate(self.edges):
                inc[u].append(i)
                inc[v].append(i)
            self._incident = inc
        return self._incident

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m}, delta_inf={self.delta_inf})"


def _connected(n, edges) -> bool:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            parts -= 1
    return parts == 1


def build_graph(n, edges, weights, delta_inf: float = 1.0) -> WeightedGraph:
    """Validate and construct a WeightedGraph; see the error classes above."""
    return WeightedGraph(n, edges, weights, delta_inf)


def kruskal_mst(g: WeightedGraph, weights=None) -> SpanningTree:
    """Exact MST for the given weights (default: the graph's own).

    Ties break toward the lowest edge id, via a stable sort. Callers routinely
    pass noisy weight vectors distinct from ``g.weights``.
    """
    w = g.weights if weights is None else np.asarray(weights, dtype=float)
    if len(w) != g.m:
        raise LengthMismatchError(f"expected {g.m} weights, got {len(w)}")
    order = np.argsort(w, kind="stable")
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    need = g.n - 1
    edges = g.edges
    for e in order:
        u, v = edges[e]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append(int(e) + 1)
            if len(chosen) == need:
                break
    if len(chosen) != need:
        raise DisconnectedError("graph is not connected")
    return SpanningTree(frozenset(chosen))


def is_spanning_tree(g: WeightedGraph, edge_ids) -> bool:
    """True iff edge_ids (1-based) has size n-1 and is acyclic and connected."""
    ids = set(edge_ids)
    if len(ids) != g.n - 1:
        return False
    if any(not (1 <= e <= g.m) for e in ids):
        return False
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in ids:
        u, v = g.edges[e - 1]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def tree_weight(g: WeightedGraph, tree) -> float:
    """Total weight of a tree (or any iterable of 1-based edge ids) under g's weights."""
    ids = tree.edge_ids if isinstance(tree, SpanningTree) else tree
    total = 0.0
    for e in ids:
        if not 1 <= e <= g.m:
            raise EdgeIndexError(f"edge id {e} out of range [1, {g.m}]")
        total += g.weights[e - 1]
    return float(total)
