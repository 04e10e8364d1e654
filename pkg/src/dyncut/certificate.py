"""k-connectivity certificates: forest peeling, colour splitting, and the
sketch-backed dynamic certificate over the supervertices of a 2-out forest."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .forest import ComponentForest, SketchFailure, boruvka_forest
from .graph import DynGraph, MultiGraph, canon
from .rng import derive_seed, mix64
from .sketch import SketchBank, SketchTransform


@dataclass(frozen=True)
class CertificateConfig:
    n: int
    k: int
    tau_const: float = 1.0

    @property
    def colors(self) -> int:
        if self.n < 2:
            return 1
        return max(1, math.floor(self.k / (4 * self.tau_const * math.log(self.n))))

    @property
    def k_prime(self) -> int:
        if self.colors == 1:
            return self.k
        return min(self.k, math.ceil(6 * self.tau_const * math.log2(self.n)))

    @property
    def boruvka_copies(self) -> int:
        return max(1, math.ceil(math.log2(max(self.n, 2))))


@dataclass
class Certificate:
    """Edges over supervertices; ``orig`` keeps the G-edge (or None) behind each."""
    vertices: list
    edges: list = field(default_factory=list)

    def add(self, a, b, orig=None) -> None:
        self.edges.append((a, b, orig))

    def __len__(self) -> int:
        return len(self.edges)

    def multigraph(self) -> MultiGraph:
        h = MultiGraph(self.vertices)
        for a, b, _ in self.edges:
            h.add_edge(a, b)
        return h


def _spanning_forest(vertices, weights: dict) -> list[tuple]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for a, b in sorted(weights):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            out.append((a, b))
    return out


def seq_certificate(g, k: int) -> Certificate:
    """Union of k successively peeled spanning forests."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(g, DynGraph):
        g = MultiGraph.from_graph(g)
    left = dict(g.weights)
    cert = Certificate(list(g.vertices))
    for _ in range(k):
        forest = _spanning_forest(g.vertices, left)
        if not forest:
            break
        for a, b in forest:
            cert.add(a, b, (a, b))
            left[(a, b)] -= 1
            if not left[(a, b)]:
                del left[(a, b)]
    return cert


def color_of(u: int, v: int, phase_seed: int, c: int, copy: int = 0) -> int:
    """Colour in 1..c of edge {u, v}; a pure function of the edge and the seed."""
    if c <= 1:
        return 1
    a, b = canon(u, v)
    h = mix64(mix64(mix64(phase_seed & (2**64 - 1)) ^ a) ^ (b << 20) ^ (copy << 40))
    return h % c + 1


def parallel_certificate(g, k: int, seed: int, tau_const: float = 1.0) -> Certificate:
    """Split edges into c random colours and union per-colour k'-certificates."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(g, DynGraph):
        g = MultiGraph.from_graph(g)
    cfg = CertificateConfig(len(g.vertices), k, tau_const)
    c = cfg.colors
    parts = [MultiGraph(g.vertices) for _ in range(c)]
    for (a, b), w in g.weights.items():
        for i in range(w):
            parts[color_of(a, b, seed, c, i) - 1].add_edge(a, b)
    cert = Certificate(list(g.vertices))
    for part in parts:
        cert.edges.extend(seq_certificate(part, cfg.k_prime).edges)
    return cert


class ColorCertificate:
    """Sketch banks for every colour class G_i, aggregated over the components of F.

    Each colour owns one transform with ``k' * L`` functions: round j of the
    query uses functions ``j*L .. j*L + L - 1`` for its Boruvka phases.
    """

    def __init__(self, g: DynGraph, forest: ComponentForest, k: int, seed: int,
                 tau_const: float = 1.0, stacks: int = 3):
        self.g = g
        self.forest = forest
        self.cfg = CertificateConfig(g.n, k, tau_const)
        self.seed = seed
        self.color_seed = derive_seed(seed, "colors", k)
        c, kp, lb = self.cfg.colors, self.cfg.k_prime, self.cfg.boruvka_copies
        self.members: list[set] = [set() for _ in range(c)]
        for u, v in g.edges():
            self.members[color_of(u, v, self.color_seed, c) - 1].add((u, v))
        self.bids = []
        self.transforms = []
        for i in range(c):
            t = SketchTransform(derive_seed(seed, "color-bank", k, i), g.n, kp * lb, stacks)
            self.transforms.append(t)
            self.bids.append(forest.register(SketchBank.from_edges(t, self.members[i])))
        self.fallbacks = 0
        self.work = 0

    def close(self) -> None:
        for bid in self.bids:
            self.forest.unregister(bid)

    def update(self, u: int, v: int, inserted: bool) -> int:
        """Route a G update (already applied to g) to its colour's bank."""
        e = canon(u, v)
        i = color_of(u, v, self.color_seed, self.cfg.colors) - 1
        if inserted:
            self.members[i].add(e)
        else:
            self.members[i].discard(e)
        self.forest.on_graph_update(u, v, inserted, bids=[self.bids[i]])
        self.work += self.transforms[i].count
        return i + 1

    def query(self, stats: dict | None = None) -> Certificate:
        """Certificate over the current F-components; persistent banks are read only."""
        f = self.forest
        cids = sorted(f.members)
        cert = Certificate(cids)
        if len(cids) <= 1:
            return cert
        n = self.g.n
        sv = np.empty(n, dtype=np.int64)
        for s, c in enumerate(cids):
            sv[list(f.members[c])] = s

        def locate(idx):
            x, y = divmod(idx, n)
            if not (0 <= x < y < n):
                return None
            return (int(sv[x]), int(sv[y]))

        for i in range(self.cfg.colors):
            try:
                self._query_color(i, cids, locate, cert, stats)
            except SketchFailure:
                self.fallbacks += 1
                self._fallback_color(i, cids, sv, cert)
        return cert

    def _query_color(self, i, cids, locate, cert, stats) -> None:
        t, bid = self.transforms[i], self.bids[i]
        aggs = self.forest.aggs[bid]
        agg = np.stack([aggs[c] for c in cids])
        lb = self.cfg.boruvka_copies
        found = []
        for j in range(self.cfg.k_prime):
            ks = range(j * lb, (j + 1) * lb)
            fj = boruvka_forest(agg[:, j * lb:(j + 1) * lb], t, locate, ks=ks, stats=stats)
            if not fj:
                break
            found.extend(fj)
            rest = slice((j + 1) * lb, None)
            if j + 1 < self.cfg.k_prime:
                idx = np.array([e[2] for e in fj], dtype=np.int64)
                units = t.units(idx, np.ones(len(idx), dtype=np.int64), ks=rest)
                tail = agg[:, rest]
                np.subtract.at(tail, np.array([e[0] for e in fj]), units)
                np.add.at(tail, np.array([e[1] for e in fj]), units)
            self.work += len(cids) * lb
        for a, b, idx in found:
            cert.add(cids[a], cids[b], divmod(idx, self.g.n))

    def _fallback_color(self, i, cids, sv, cert) -> None:
        q = MultiGraph(range(len(cids)))
        for u, v in self.members[i]:
            q.add_edge(int(sv[u]), int(sv[v]))
        for a, b, _ in seq_certificate(q, self.cfg.k_prime).edges:
            cert.add(cids[a], cids[b], None)
        self.work += len(self.members[i])
