"""Conductance, expander decomposition, and a decremental decomposition with pruning.

Small clusters (at most ``EXACT_CAP`` vertices) are certified by enumerating
every bipartition. Larger ones use the Cheeger bound lambda_2 / 2 of the
normalised Laplacian as the certificate and the spectral sweep cut to split.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh

from .graph import DynGraph

EXACT_CAP = 16


class EmptySide(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Terminated(RuntimeError):
    """The decremental structure has used up its deletion budget."""


def volume(g: DynGraph, S, within=None) -> int:
    if within is None:
        return sum(g.degree(u) for u in S)
    w = within if isinstance(within, (set, frozenset)) else set(within)
    return sum(1 for u in S for x in g.adj[u] if x in w)


def conductance(g: DynGraph, S, U=None) -> Fraction:
    """Boundary over the smaller volume, inside G[U] (whole graph when U is None).

    A split with no crossing edges has conductance 0, even when one side has
    zero volume.
    """
    U = set(range(g.n)) if U is None else set(U)
    S = set(S)
    if not S or not S < U:
        raise EmptySide("S must be a non-empty proper subset")
    rest = U - S
    cut = sum(1 for u in S for x in g.adj[u] if x in rest)
    if cut == 0:
        return Fraction(0)
    vs = sum(1 for u in S for x in g.adj[u] if x in U)
    vr = sum(1 for u in rest for x in g.adj[u] if x in U)
    return Fraction(cut, min(vs, vr))


def _local(g: DynGraph, U):
    verts = sorted(U)
    index = {v: i for i, v in enumerate(verts)}
    a = np.zeros((len(verts), len(verts)), dtype=np.int64)
    for v in verts:
        for x in g.adj[v]:
            j = index.get(x)
            if j is not None:
                a[index[v], j] = 1
    return verts, a


def min_conductance(g: DynGraph, U) -> tuple[Fraction, frozenset]:
    """Exact minimum conductance of G[U] and a side attaining it (|U| >= 2)."""
    if len(U) > EXACT_CAP:
        raise TooLarge(f"exact conductance limited to {EXACT_CAP} vertices")
    verts, a = _local(g, U)
    k = len(verts)
    if k < 2:
        raise EmptySide("need at least two vertices")
    masks = np.arange(1, 1 << (k - 1), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k)) & 1).astype(np.int64)
    deg = a.sum(axis=1)
    vs = bits @ deg
    vr = deg.sum() - vs
    inside = np.einsum("mi,ij,mj->m", bits, a, bits)
    cut = vs - inside
    den = np.minimum(vs, vr)
    # compare cut/den as fractions without floating error: zero cuts first
    zero = cut == 0
    if zero.any():
        i = int(np.argmax(zero))
        return Fraction(0), frozenset(verts[j] for j in range(k) if bits[i, j])
    best, arg = None, 0
    approx = cut / den
    order = np.argsort(approx, kind="stable")[:8]
    for i in order:
        f = Fraction(int(cut[i]), int(den[i]))
        if best is None or f < best:
            best, arg = f, int(i)
    return best, frozenset(verts[j] for j in range(k) if bits[arg, j])


def verify_expander(g: DynGraph, U, phi) -> bool:
    if len(U) <= 1:
        return True
    return min_conductance(g, U)[0] >= Fraction(phi)


def spectral_sweep(g: DynGraph, U) -> tuple[float, frozenset, Fraction]:
    """(lambda_2 of the normalised Laplacian of G[U], best sweep side, its conductance)."""
    verts, a = _local(g, U)
    deg = a.sum(axis=1).astype(float)
    if (deg == 0).any():
        side = frozenset(verts[i] for i in np.flatnonzero(deg == 0)[:1])
        return 0.0, side, Fraction(0)
    dinv = 1.0 / np.sqrt(deg)
    lap = np.eye(len(verts)) - dinv[:, None] * a * dinv[None, :]
    vals, vecs = eigh(lap)
    lam2 = float(vals[1])
    order = np.argsort(vecs[:, 1] * dinv, kind="stable")
    best, best_side = None, None
    total = deg.sum()
    inside_vol, cut = 0.0, 0
    chosen = np.zeros(len(verts), dtype=bool)
    for pos in order[:-1]:
        row = a[pos]
        cut += int(deg[pos]) - 2 * int(row[chosen].sum())
        chosen[pos] = True
        inside_vol += deg[pos]
        den = int(min(inside_vol, total - inside_vol))
        f = Fraction(cut, den)
        if best is None or f < best:
            best, best_side = f, frozenset(verts[i] for i in np.flatnonzero(chosen))
    return lam2, best_side, best


def certify(g: DynGraph, U, phi) -> tuple[bool, frozenset | None]:
    """Whether G[U] is a phi-expander, else a low-conductance side to split on."""
    if len(U) <= 1:
        return True, None
    if len(U) <= EXACT_CAP:
        val, side = min_conductance(g, U)
        return (True, None) if val >= Fraction(phi) else (False, side)
    lam2, side, val = spectral_sweep(g, U)
    if lam2 / 2 >= float(phi) + 1e-9:
        return True, None
    return False, side


def _components(g: DynGraph, U) -> list[set]:
    left = set(U)
    out = []
    while left:
        s = left.pop()
        comp, q = {s}, deque([s])
        while q:
            x = q.popleft()
            for y in g.adj[x]:
                if y in left:
                    left.discard(y)
                    comp.add(y)
                    q.append(y)
        out.append(comp)
    return out


def static_decompose(g: DynGraph, phi) -> "ExpanderPartition":
    """Partition V into certified phi-expanders by recursive low-conductance splitting."""
    clusters = []
    if phi > 1:
        clusters = [{v} for v in range(g.n)]
    else:
        stack = _components(g, range(g.n))
        while stack:
            U = stack.pop()
            ok, side = certify(g, U, phi)
            if ok:
                clusters.append(U)
                continue
            for part in (set(side), U - side):
                stack.extend(_components(g, part))
    return ExpanderPartition(g, phi, clusters)


@dataclass
class ExpanderPartition:
    g: DynGraph
    phi: object
    clusters: list

    def __post_init__(self):
        self.cluster_of = [0] * self.g.n
        for i, U in enumerate(self.clusters):
            for v in U:
                self.cluster_of[v] = i

    def inter_cluster_edges(self) -> list[tuple[int, int]]:
        c = self.cluster_of
        return [(u, v) for u, v in self.g.edges() if c[u] != c[v]]

    def boundary_ratio(self) -> float:
        """Inter-cluster edges divided by phi * m (the constant hidden in O(phi m))."""
        m = self.g.m
        if m == 0 or self.phi == 0:
            return 0.0
        return len(self.inter_cluster_edges()) / (float(self.phi) * m)


@dataclass(frozen=True)
class ClusterChange:
    cluster: int
    pruned: frozenset = field(default_factory=frozenset)
    exploded: bool = False


class _InterClusterNoop:
    def __repr__(self) -> str:
        return "InterClusterNoop"


INTER_CLUSTER_NOOP = _InterClusterNoop()


class DecExpander:
    """Decremental phi/6-expander decomposition over a graph it owns.

    Per cluster: initial volume (degrees of the initial graph), a deletion
    counter, a monotone pruned set and the explosion threshold
    ``DelCount > phi * vol / 20``.
    """

    def __init__(self, g: DynGraph, phi, partition: ExpanderPartition | None = None,
                 copy: bool = True):
        self.g = g.copy() if copy else g
        self.phi = phi
        part = partition if partition is not None else static_decompose(self.g, phi)
        self.deg0 = [self.g.degree(v) for v in range(self.g.n)]
        self.members: dict[int, set[int]] = {}
        self.original: dict[int, frozenset] = {}
        self.cluster_of = [0] * self.g.n
        self.vol0: dict[int, int] = {}
        self.delcount: dict[int, int] = {}
        self.pruned: dict[int, set[int]] = {}
        self.exploded: set[int] = set()
        self._next = 0
        for U in part.clusters:
            cid = self._new_cluster(U)
            if len(U) > 1:
                self.original[cid] = frozenset(U)
                self.vol0[cid] = sum(self.deg0[v] for v in U)
                self.delcount[cid] = 0
                self.pruned[cid] = set()
        self.deletions = 0
        self.max_deletions = max(1, math.floor(float(phi) ** 2 * self.g.m))
        self.work = 0

    def _new_cluster(self, U) -> int:
        cid = self._next
        self._next += 1
        self.members[cid] = set(U)
        for v in U:
            self.cluster_of[v] = cid
        return cid

    def budget(self, cid: int) -> int:
        return math.floor(float(self.phi) * self.vol0[cid] / 20)

    def clusters(self) -> list[set[int]]:
        return list(self.members.values())

    def _split_off(self, cid: int, verts) -> None:
        for v in verts:
            self.members[cid].discard(v)
            self._new_cluster({v})
        if not self.members[cid]:
            del self.members[cid]

    def delete(self, u: int, v: int):
        if self.deletions >= self.max_deletions:
            raise Terminated(f"deletion budget {self.max_deletions} exhausted")
        self.g.delete_edge(u, v)
        self.deletions += 1
        cu = self.cluster_of[u]
        if cu != self.cluster_of[v]:
            return INTER_CLUSTER_NOOP
        self.delcount[cu] += 1
        if 20 * self.delcount[cu] > float(self.phi) * self.vol0[cu]:
            return self._explode(cu)
        return self._prune(cu)

    def _explode(self, cid: int) -> ClusterChange:
        gone = frozenset(self.members[cid])
        self.pruned[cid] = set(self.original[cid])
        self.exploded.add(cid)
        self._split_off(cid, sorted(gone))
        self.work += len(gone)
        return ClusterChange(cid, gone, True)

    def _prune(self, cid: int) -> ClusterChange:
        """Peel low-degree vertices, then cut off uncertified low-conductance sides."""
        g, phi6 = self.g, Fraction(self.phi) / 6
        U = set(self.members[cid])
        out: set[int] = set()

        def peel():
            q = deque(U)
            while q:
                x = q.popleft()
                if x not in U:
                    continue
                inside = sum(1 for y in g.adj[x] if y in U)
                if inside < phi6 * self.deg0[x]:
                    U.discard(x)
                    out.add(x)
                    q.extend(y for y in g.adj[x] if y in U)
                self.work += 1

        peel()
        while len(U) > 1:
            ok, side = certify(g, U, phi6)
            if ok:
                break
            comp = set(side)
            rest = U - comp
            small = comp if volume(g, comp, U) <= volume(g, rest, U) else rest
            U -= small
            out |= small
            peel()
        if len(U) == 1:
            out |= U
            U = set()
        pruned = self.pruned[cid] | out
        i = self.delcount[cid]
        orig = self.original[cid]
        vol_p = sum(self.deg0[x] for x in pruned)
        bnd = sum(1 for x in pruned for y in g.adj[x] if y in orig and y not in pruned)
        if vol_p * phi6 * 6 > 8 * i or bnd > 4 * i:
            return self._explode(cid)
        self.pruned[cid] = pruned
        if out:
            self._split_off(cid, sorted(out))
        return ClusterChange(cid, frozenset(out), False)

    def accounting_ok(self) -> bool:
        """sum vol(P_U) <= (20 / phi) * sum DelCount(U), with initial-graph volumes."""
        lhs = sum(self.deg0[x] for P in self.pruned.values() for x in P)
        rhs = sum(self.delcount.values())
        return lhs * Fraction(self.phi) <= 20 * rhs

    def check_expansion(self, cap: int = EXACT_CAP) -> bool:
        """Every non-singleton cluster of size <= cap is a phi/6-expander right now."""
        phi6 = Fraction(self.phi) / 6
        for U in self.members.values():
            if 1 < len(U) <= cap and not verify_expander(self.g, U, phi6):
                return False
        return True
