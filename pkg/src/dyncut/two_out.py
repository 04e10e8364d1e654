"""Random 2-out subgraph R of G, its spanning forest F, and the contraction G/R."""
from __future__ import annotations

from collections import Counter

from .forest import ComponentForest
from .graph import ContractionMap, DynGraph, canon
from .rng import stream


class TwoOutState:
    """Two uniformly sampled incident edges per vertex, kept valid under updates.

    ``samples[u]`` holds the far endpoints of u's two samples (None when u is
    isolated). Insertions use reservoir replacement so each sample stays
    uniform over u's current incident edges; deletions re-draw only the
    samples that pointed at the deleted edge.

    ``version`` changes whenever the component partition of F may have changed.
    """

    def __init__(self, g: DynGraph, seed: int, forest: ComponentForest | None = None,
                 label=0, rebuild_every: int | None = None, rebuild_offset: int = 0):
        self.g = g
        self.rng = stream(seed, "two-out", label)
        self.forest = forest if forest is not None else ComponentForest(g.n)
        self.samples: list[list[int | None]] = [[None, None] for _ in range(g.n)]
        self.r = Counter()
        self.version = 0
        self.rebuild_every = rebuild_every
        self.updates = rebuild_offset
        self.work = 0
        self.rebuild()

    def _draw(self, u: int) -> list[int | None]:
        if not self.g.adj[u]:
            return [None, None]
        return [self.g.random_neighbor(u, self.rng), self.g.random_neighbor(u, self.rng)]

    def rebuild(self) -> None:
        """Resample every vertex and rebuild F from scratch."""
        self.samples = [self._draw(u) for u in range(self.g.n)]
        self.r = Counter()
        for u, pair in enumerate(self.samples):
            for x in pair:
                if x is not None:
                    self.r[canon(u, x)] += 1
        parent = list(range(self.g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree = []
        for u, v in sorted(self.r):
            a, b = find(u), find(v)
            if a != b:
                parent[b] = a
                tree.append((u, v))
        self.forest.reset(tree)
        self.version += 1
        self.work += self.g.n

    def _drop(self, e, changes) -> None:
        self.r[e] -= 1
        if self.r[e]:
            return
        del self.r[e]
        f = self.forest
        if not f.has_edge(*e):
            return
        f.cut(*e)
        changes.append(("cut", e))
        self.work += len(self.r)
        for a, b in self.r:
            if not f.connected(a, b):
                f.link(a, b)
                changes.append(("link", (a, b)))
                return
        self.version += 1

    def _add(self, e, changes) -> None:
        self.r[e] += 1
        if self.r[e] == 1 and not self.forest.connected(*e):
            self.forest.link(*e)
            changes.append(("link", e))
            self.version += 1

    def _replace(self, u: int, i: int, x: int | None, changes) -> None:
        old = self.samples[u][i]
        if old == x:
            return
        self.samples[u][i] = x
        if x is not None:
            self._add(canon(u, x), changes)
        if old is not None:
            self._drop(canon(u, old), changes)

    def on_update(self, u: int, v: int, inserted: bool) -> list:
        """Mirror a G update that has already been applied; returns F changes."""
        changes: list = []
        self.updates += 1
        if self.rebuild_every and self.updates % self.rebuild_every == 0:
            self.rebuild()
            return [("rebuild", None)]
        for a, b in ((u, v), (v, u)):
            if inserted:
                d = self.g.degree(a)
                for i in range(2):
                    if d == 1 or self.rng.integers(d) == 0:
                        self._replace(a, i, b, changes)
            else:
                for i in range(2):
                    if self.samples[a][i] == b:
                        self._replace(a, i, self.g.random_neighbor(a, self.rng), changes)
        return changes

    def contraction_map(self) -> ContractionMap:
        labels = [0] * self.g.n
        for i, ms in enumerate(self.forest.components()):
            for x in ms:
                labels[x] = i
        return ContractionMap(self.g.n, labels)

    def num_supervertices(self) -> int:
        return len(self.forest.members)

    def check(self) -> bool:
        """Every sample is a live incident edge and F spans exactly R's components."""
        for u, pair in enumerate(self.samples):
            for x in pair:
                if (x is None) != (not self.g.adj[u]):
                    return False
                if x is not None and not self.g.has_edge(u, x):
                    return False
        expect = Counter(canon(u, x) for u, pair in enumerate(self.samples) for x in pair if x is not None)
        if expect != self.r:
            return False
        f = self.forest
        if any(e not in self.r for e in f.edges()):
            return False
        if len(f.edges()) != self.g.n - len(f.members):
            return False
        return all(f.connected(a, b) for a, b in self.r)
