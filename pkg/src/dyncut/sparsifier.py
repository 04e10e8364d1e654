"""Trim/shave sparsifiers that keep every non-singleton minimum cut, static and dynamic."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .expander import DecExpander, ExpanderPartition, static_decompose
from .graph import ContractionMap, DynGraph, MultiGraph, canon, quotient
from .oracle import all_cut_values, popcount


def trim(g: DynGraph, U, order=None) -> set[int]:
    """Repeatedly drop a vertex with fewer than 2/5 of its edges inside the set.

    ``order`` fixes the sequence in which candidates are examined; the fixed
    point does not depend on it.
    """
    U = set(U)
    inside = {u: sum(1 for x in g.adj[u] if x in U) for u in U}
    q = deque(order if order is not None else sorted(U))
    queued = set(q)
    while q:
        u = q.popleft()
        queued.discard(u)
        if u not in U or 5 * inside[u] >= 2 * g.degree(u):
            continue
        U.discard(u)
        for x in g.adj[u]:
            if x in U:
                inside[x] -= 1
                if x not in queued:
                    q.append(x)
                    queued.add(x)
    return U


def shave(g: DynGraph, U) -> set[int]:
    """Vertices with more than d(u)/2 + 1 of their edges inside the original set."""
    U = set(U)
    return {u for u in U if 2 * sum(1 for x in g.adj[u] if x in U) > g.degree(u) + 2}


def _contraction(n: int, cores) -> ContractionMap:
    clusters = [set(c) for c in cores if c]
    seen = set().union(*clusters) if clusters else set()
    clusters += [{v} for v in range(n) if v not in seen]
    return ContractionMap.from_clusters(n, clusters)


@dataclass
class StaticSparsifier:
    partition: ExpanderPartition
    trimmed: list
    shaved: list
    cmap: ContractionMap
    h: MultiGraph


def build_sparsifier(g: DynGraph, phi, partition: ExpanderPartition | None = None) -> StaticSparsifier:
    """Contract shave(trim(U)) for every cluster U of a phi-expander decomposition."""
    part = partition if partition is not None else static_decompose(g, phi)
    trimmed = [trim(g, U) for U in part.clusters]
    shaved = [shave(g, T) for T in trimmed]
    cmap = _contraction(g.n, shaved)
    return StaticSparsifier(part, trimmed, shaved, cmap, quotient(g, cmap))


class DecSparsifier:
    """Decremental sparsifier: a DecExpander plus trimmed/shaved cores per cluster.

    ``deg_in[u]`` counts u's neighbours inside its trimmed core. Vertices only
    ever leave cores; Uncontract re-attaches a vertex as its own node of H.
    """

    def __init__(self, g: DynGraph, phi, partition: ExpanderPartition | None = None):
        self.g = g.copy()
        self.phi = phi
        self.dex = DecExpander(self.g, phi, partition, copy=False)
        self.core_of: list[int | None] = [None] * self.g.n
        self.trimmed: dict[int, set[int]] = {}
        self.shaved: dict[int, set[int]] = {}
        for cid, U in self.dex.members.items():
            if len(U) < 2:
                continue
            T = trim(self.g, U)
            if not T:
                continue
            self.trimmed[cid] = T
            self.shaved[cid] = shave(self.g, T)
            for v in T:
                self.core_of[v] = cid
        self.deg_in = [0] * self.g.n
        for v in range(self.g.n):
            c = self.core_of[v]
            if c is not None:
                self.deg_in[v] = sum(1 for x in self.g.adj[v] if self.core_of[x] == c)
        self.cmap = _contraction(self.g.n, self.shaved.values())
        self.h = quotient(self.g, self.cmap)
        self.work = 0

    def _weak(self, v: int) -> bool:
        return 5 * self.deg_in[v] < 2 * self.g.degree(v)

    def _unshaven(self, v: int) -> bool:
        return not 2 * self.deg_in[v] > self.g.degree(v) + 2

    def uncontract(self, w: int) -> None:
        cm, h = self.cmap, self.h
        old = cm.cluster_of[w]
        if len(cm.members[old]) == 1:
            return
        new = cm.uncontract(w)
        h.vertices.append(new)
        for x in self.g.adj[w]:
            cx = cm.cluster_of[x]
            if cx == old:
                h.add_edge(new, old, 1)
            else:
                h.add_edge(old, cx, -1)
                h.add_edge(new, cx, 1)
        self.work += len(self.g.adj[w])

    def _eject(self, c: int, v: int) -> None:
        S = self.shaved[c]
        if v in S:
            S.discard(v)
            self.uncontract(v)

    def remove(self, u: int) -> None:
        """Drop u from its trimmed core and cascade, ejecting shaved vertices that fail."""
        c = self.core_of[u]
        if c is None:
            return
        q = deque([u])
        self.core_of[u] = None
        self.trimmed[c].discard(u)
        while q:
            w = q.popleft()
            self._eject(c, w)
            for x in self.g.adj[w]:
                if self.core_of[x] != c:
                    continue
                self.deg_in[x] -= 1
                if self._weak(x):
                    self.core_of[x] = None
                    self.trimmed[c].discard(x)
                    q.append(x)
                elif x in self.shaved[c] and self._unshaven(x):
                    self._eject(c, x)
            self.work += len(self.g.adj[w])

    def delete(self, u: int, v: int):
        cm = self.cmap
        if cm.cluster_of[u] != cm.cluster_of[v]:
            self.h.add_edge(cm.cluster_of[u], cm.cluster_of[v], -1)
        same = self.core_of[u] is not None and self.core_of[u] == self.core_of[v]
        change = self.dex.delete(u, v)
        if same:
            self.deg_in[u] -= 1
            self.deg_in[v] -= 1
        for w in getattr(change, "pruned", ()):
            self.remove(w)
        for w in (u, v):
            c = self.core_of[w]
            if c is None:
                continue
            if self._weak(w):
                self.remove(w)
            elif w in self.shaved[c] and self._unshaven(w):
                self._eject(c, w)
        return change

    def audit(self) -> bool:
        """Counters match, invariants hold, cores sit inside the from-scratch ones, H is the quotient."""
        g = self.g
        for c, T in self.trimmed.items():
            U = self.dex.members.get(c, set())
            if not T <= U:
                return False
            for v in T:
                if self.deg_in[v] != sum(1 for x in g.adj[v] if x in T) or self._weak(v):
                    return False
            S = self.shaved[c]
            if not S <= T or any(self._unshaven(v) for v in S):
                return False
            if not S <= shave(g, trim(g, U)):
                return False
        q = quotient(g, self.cmap)
        return q.weights == self.h.weights and sorted(q.vertices) == sorted(self.h.vertices)


class DynSparsifier:
    """Fully dynamic wrapper: phases of L = max(1, floor(phi^2 m0)) updates.

    Insertions wait in the buffer I; deleting a buffered edge just drops it.
    On the (L+1)-th update of a phase everything is rebuilt from the current
    graph. ``phi_for(g)`` picks phi at each rebuild; ``on_rebuild`` is told.
    """

    def __init__(self, g: DynGraph, phi_for, on_rebuild=None):
        self.g = g.copy()
        self.phi_for = phi_for
        self.on_rebuild = on_rebuild
        self.rebuilds = 0
        self.work = 0
        self._rebuild()

    def _rebuild(self) -> None:
        self.phi = self.phi_for(self.g)
        self.dec = DecSparsifier(self.g, self.phi)
        self.buffer: set[tuple[int, int]] = set()
        self.count = 0
        self.m0 = self.g.m
        self.phase_length = max(1, math.floor(float(self.phi) ** 2 * self.m0))
        self.rebuilds += 1
        self.work += self.g.m + self.g.n
        if self.on_rebuild is not None:
            self.on_rebuild(self)

    def update(self, u: int, v: int, inserted: bool) -> bool:
        """Apply one update; returns True when it triggered a rebuild."""
        self.g.update(u, v, inserted)
        self.count += 1
        if self.count > self.phase_length:
            self._rebuild()
            return True
        e = canon(u, v)
        if inserted:
            self.buffer.add(e)
        elif e in self.buffer:
            self.buffer.discard(e)
        else:
            w0 = self.dec.work + self.dec.dex.work
            self.dec.delete(u, v)
            self.work += self.dec.work + self.dec.dex.work - w0
        self.work += 1
        return False

    def export(self) -> MultiGraph:
        h = self.dec.h
        out = MultiGraph(h.vertices)
        out.weights = dict(h.weights)
        lab = self.dec.cmap.cluster_of
        for u, v in self.buffer:
            out.add_edge(lab[u], lab[v])
        return out

    def contraction(self) -> ContractionMap:
        return self.dec.cmap


def nmc_violations(g: DynGraph, h: MultiGraph, cmap: ContractionMap) -> int:
    """Count non-singleton minimum cuts of g that h does not keep (brute force, small n).

    A cut is kept when no supervertex straddles it and its value in h matches.
    """
    n = g.n
    if n < 4:
        return 0
    masks, vals = all_cut_values(MultiGraph.from_graph(g))
    pc = popcount(masks)
    pick = (vals == vals.min()) & (pc >= 2) & (n - pc >= 2)
    bad = 0
    lab = cmap.cluster_of
    for m, val in zip(masks[pick], vals[pick]):
        inside = [(int(m) >> i) & 1 for i in range(n)]
        nodes = {lab[i] for i in range(n) if inside[i]}
        if any(lab[i] in nodes for i in range(n) if not inside[i]) or h.cut_value(nodes) != val:
            bad += 1
    return bad
