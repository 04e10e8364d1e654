"""Dynamic simple graph, min-degree index, contraction maps and quotients."""
from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable


class GraphError(ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class InvalidPartition(GraphError):
    pass


def canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class UpdateReceipt:
    u: int
    v: int
    inserted: bool
    old_deg_u: int
    new_deg_u: int
    old_deg_v: int
    new_deg_v: int


class DegreeIndex:
    """Degree buckets with a lazily advanced minimum pointer."""

    def __init__(self, n: int):
        self.buckets: dict[int, set[int]] = defaultdict(set)
        if n:
            self.buckets[0] = set(range(n))
        self._min = 0

    def move(self, u: int, old: int, new: int) -> None:
        b = self.buckets[old]
        b.discard(u)
        if not b:
            del self.buckets[old]
        self.buckets[new].add(u)
        if new < self._min:
            self._min = new
        elif old == self._min and not b:
            while self._min not in self.buckets:
                self._min += 1

    @property
    def min_degree(self) -> int:
        return self._min if self.buckets else 0

    def min_vertex(self) -> int | None:
        if not self.buckets:
            return None
        return min(self.buckets[self._min])


class DynGraph:
    """Mutable simple undirected graph on the fixed vertex set 0..n-1.

    Neighbour lists are kept alongside the adjacency sets so that a uniform
    random incident edge can be drawn in O(1).
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self._nbr: list[list[int]] = [[] for _ in range(n)]
        self._pos: list[dict[int, int]] = [{} for _ in range(n)]
        self.m = 0
        self.degrees = DegreeIndex(n)
        for u, v in edges:
            self.insert_edge(u, v)

    def _check(self, u: int, v: int) -> None:
        for x in (u, v):
            if not (0 <= x < self.n):
                raise UnknownVertex(f"vertex {x} not in 0..{self.n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at {u}")

    def _attach(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self._pos[u][v] = len(self._nbr[u])
        self._nbr[u].append(v)

    def _detach(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        i = self._pos[u].pop(v)
        last = self._nbr[u].pop()
        if last != v:
            self._nbr[u][i] = last
            self._pos[u][last] = i

    def insert_edge(self, u: int, v: int) -> UpdateReceipt:
        self._check(u, v)
        if v in self.adj[u]:
            raise DuplicateEdge(f"edge ({u},{v}) already present")
        du, dv = len(self.adj[u]), len(self.adj[v])
        self._attach(u, v)
        self._attach(v, u)
        self.m += 1
        self.degrees.move(u, du, du + 1)
        self.degrees.move(v, dv, dv + 1)
        return UpdateReceipt(u, v, True, du, du + 1, dv, dv + 1)

    def delete_edge(self, u: int, v: int) -> UpdateReceipt:
        self._check(u, v)
        if v not in self.adj[u]:
            raise MissingEdge(f"edge ({u},{v}) not present")
        du, dv = len(self.adj[u]), len(self.adj[v])
        self._detach(u, v)
        self._detach(v, u)
        self.m -= 1
        self.degrees.move(u, du, du - 1)
        self.degrees.move(v, dv, dv - 1)
        return UpdateReceipt(u, v, False, du, du - 1, dv, dv - 1)

    def update(self, u: int, v: int, inserted: bool) -> UpdateReceipt:
        return self.insert_edge(u, v) if inserted else self.delete_edge(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def min_degree(self) -> int:
        return self.degrees.min_degree

    def min_degree_vertex(self) -> int | None:
        return self.degrees.min_vertex()

    def neighbors(self, u: int) -> list[int]:
        return self._nbr[u]

    def random_neighbor(self, u: int, rng) -> int | None:
        nb = self._nbr[u]
        if not nb:
            return None
        return nb[int(rng.integers(len(nb)))]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def copy(self) -> "DynGraph":
        return DynGraph(self.n, self.edges())

    def state_hash(self) -> str:
        h = hashlib.sha256(str(self.n).encode())
        for e in sorted(self.edges()):
            h.update(f"{e[0]},{e[1]};".encode())
        return h.hexdigest()

    def cut_edges(self, side: Iterable[int]) -> list[tuple[int, int]]:
        s = set(side)
        return [canon(u, v) for u in s for v in self.adj[u] if v not in s]

    def cut_value(self, side: Iterable[int]) -> int:
        s = set(side)
        return sum(1 for u in s for v in self.adj[u] if v not in s)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            out.append(comp)
        return out

    def __repr__(self) -> str:
        return f"DynGraph(n={self.n}, m={self.m})"


class ContractionMap:
    """Partition of V into clusters, with explicit member sets so clusters can be split."""

    def __init__(self, n: int, labels: Iterable[int] | None = None):
        self.n = n
        self.cluster_of: list[int] = list(range(n)) if labels is None else list(labels)
        if len(self.cluster_of) != n:
            raise InvalidPartition(f"{len(self.cluster_of)} labels for {n} vertices")
        self.members: dict[int, set[int]] = defaultdict(set)
        for v, c in enumerate(self.cluster_of):
            self.members[c].add(v)
        self.members = dict(self.members)
        self._next = max(self.members, default=-1) + 1

    @classmethod
    def identity(cls, n: int) -> "ContractionMap":
        return cls(n)

    @classmethod
    def from_clusters(cls, n: int, clusters: Iterable[Iterable[int]]) -> "ContractionMap":
        labels = [-1] * n
        for i, cl in enumerate(clusters):
            for v in cl:
                if not (0 <= v < n) or labels[v] != -1:
                    raise InvalidPartition(f"vertex {v} repeated or out of range")
                labels[v] = i
        if -1 in labels:
            raise InvalidPartition(f"vertex {labels.index(-1)} not covered")
        return cls(n, labels)

    def clusters(self) -> list[set[int]]:
        return list(self.members.values())

    def num_clusters(self) -> int:
        return len(self.members)

    def new_id(self) -> int:
        c = self._next
        self._next += 1
        return c

    def uncontract(self, v: int) -> int:
        """Split v off into its own cluster; returns its (possibly new) cluster id."""
        c = self.cluster_of[v]
        if len(self.members[c]) == 1:
            return c
        self.members[c].discard(v)
        nc = self.new_id()
        self.members[nc] = {v}
        self.cluster_of[v] = nc
        return nc

    def merge(self, vertices: Iterable[int]) -> int:
        vs = list(vertices)
        target = self.cluster_of[vs[0]]
        for v in vs[1:]:
            c = self.cluster_of[v]
            if c == target:
                continue
            self.members[c].discard(v)
            if not self.members[c]:
                del self.members[c]
            self.members[target].add(v)
            self.cluster_of[v] = target
        return target

    def lift(self, nodes: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for c in nodes:
            out |= self.members[c]
        return out

    def copy(self) -> "ContractionMap":
        return ContractionMap(self.n, self.cluster_of)


class MultiGraph:
    """Undirected multigraph: weights count parallel edges, no self-loops."""

    def __init__(self, vertices: Iterable[int] = (), weights: dict | None = None):
        self.vertices: list[int] = list(vertices)
        self.weights: dict[tuple[int, int], int] = {}
        for (a, b), w in (weights or {}).items():
            self.add_edge(a, b, w)

    def add_edge(self, a: int, b: int, w: int = 1) -> None:
        if a == b or w == 0:
            return
        key = canon(a, b)
        nw = self.weights.get(key, 0) + w
        if nw:
            self.weights[key] = nw
        else:
            del self.weights[key]

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "MultiGraph":
        g = cls(vertices)
        for a, b in edges:
            g.add_edge(a, b)
        return g

    @classmethod
    def from_graph(cls, g: DynGraph) -> "MultiGraph":
        return cls.from_edges(range(g.n), g.edges())

    @property
    def num_edges(self) -> int:
        return sum(self.weights.values())

    def cut_value(self, side: Iterable) -> int:
        s = set(side)
        return sum(w for (a, b), w in self.weights.items() if (a in s) != (b in s))

    def dense(self):
        """Weight matrix plus the vertex order used for its rows."""
        import numpy as np

        index = {v: i for i, v in enumerate(self.vertices)}
        w = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for (a, b), c in self.weights.items():
            i, j = index[a], index[b]
            w[i, j] += c
            w[j, i] += c
        return w

    def __repr__(self) -> str:
        return f"MultiGraph(|V|={len(self.vertices)}, |E|={self.num_edges})"


def quotient(g: DynGraph, cmap: ContractionMap) -> MultiGraph:
    if cmap.n != g.n or len(cmap.cluster_of) != g.n:
        raise InvalidPartition("contraction map does not cover V(g)")
    lab = cmap.cluster_of
    h = MultiGraph(sorted(cmap.members))
    for u, v in g.edges():
        if lab[u] != lab[v]:
            h.add_edge(lab[u], lab[v])
    return h
