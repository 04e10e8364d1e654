"""Randomized fully dynamic edge connectivity.

Each repetition keeps a random 2-out contraction G' = G/R and, per degree
range, sketch banks from which a connectivity certificate of G' can be
assembled at query time. The answer is min(delta, best cut over repetitions),
where every repetition's cut is lifted back to G and measured there, so the
answer never undershoots lambda(G).
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .certificate import ColorCertificate
from .graph import DynGraph
from .oracle import stoer_wagner
from .rng import derive_seed
from .two_out import TwoOutState

INF = math.inf


class NoWitness(LookupError):
    """No non-singleton witness exists; ``fallback`` holds the degree cut instead."""

    def __init__(self, msg: str, fallback: list):
        super().__init__(msg)
        self.fallback = fallback


class WitnessDisabled(RuntimeError):
    pass


@dataclass(frozen=True)
class ConnectivityAnswer:
    lam: int
    witness: list | None = None
    source: str = "min-degree"


def degree_range(delta: int, n: int) -> int:
    """delta_0 = 2^(i+1) for delta in [2^i, 2^(i+1)), capped at n."""
    return min(1 << delta.bit_length(), n)


class Repetition:
    def __init__(self, engine: "RandEngine", t: int):
        self.engine = engine
        self.t = t
        g, n = engine.g, engine.g.n
        every = n if engine.rebuild else None
        self.two = TwoOutState(g, engine.seed, label=t, rebuild_every=every,
                               rebuild_offset=(t * n) // max(engine.T, 1))
        self.forest = self.two.forest
        self.ranges: dict[int, ColorCertificate] = {}
        self.memo: dict[int, tuple] = {}
        self.version = 0

    def structure(self, d0: int) -> ColorCertificate:
        cc = self.ranges.get(d0)
        if cc is None:
            e = self.engine
            cc = ColorCertificate(e.g, self.forest, d0, derive_seed(e.seed, "range", self.t, d0),
                                  e.tau_const, e.stacks)
            self.ranges[d0] = cc
        return cc

    def evict(self, keep) -> None:
        for d0 in [d for d in self.ranges if d not in keep]:
            self.ranges.pop(d0).close()
            self.memo.pop(d0, None)

    def update(self, u: int, v: int, inserted: bool) -> None:
        inter = not self.forest.connected(u, v)
        for cc in self.ranges.values():
            cc.update(u, v, inserted)
        before = self.two.version
        self.two.on_update(u, v, inserted)
        if inter or self.two.version != before:
            self.version += 1

    def value(self, d0: int, stats=None):
        hit = self.memo.get(d0)
        if hit is not None and hit[0] == self.version:
            return hit[1], hit[2]
        out = (INF, None)
        if len(self.forest.members) > 1:
            cert = self.structure(d0).query(stats)
            h = cert.multigraph()
            res = stoer_wagner(h)
            side = set()
            for c in res.side:
                side |= self.forest.members[c]
            out = (self.engine.g.cut_value(side), frozenset(side))
        self.memo[d0] = (self.version, *out)
        return out

    def work(self) -> int:
        return self.two.work + self.forest.work + sum(cc.work for cc in self.ranges.values())


class RandEngine:
    def __init__(self, g: DynGraph | int, T: int = 32, seed: int = 0, tau_const: float = 1.0,
                 stacks: int = 3, rebuild: bool = True, report_cuts: bool = False,
                 eager: bool = False):
        self.g = DynGraph(g) if isinstance(g, int) else g.copy()
        self.T, self.seed, self.tau_const, self.stacks = T, seed, tau_const, stacks
        self.rebuild = rebuild
        self.report_cuts = report_cuts
        self.reps = [Repetition(self, t) for t in range(T)] if self.g.n >= 2 else []
        if eager:
            d0 = 2
            while d0 <= self.g.n:
                for r in self.reps:
                    r.structure(d0)
                d0 *= 2
        self.eager = eager
        self.last: ConnectivityAnswer | None = None
        self._side = None
        self.stats: dict = {}

    @property
    def n(self) -> int:
        return self.g.n

    def update(self, u: int, v: int, inserted: bool) -> None:
        self.g.update(u, v, inserted)
        for r in self.reps:
            r.update(u, v, inserted)
        self.last = None

    def insert(self, u: int, v: int) -> None:
        self.update(u, v, True)

    def delete(self, u: int, v: int) -> None:
        self.update(u, v, False)

    def query(self) -> ConnectivityAnswer:
        g = self.g
        if g.n < 2:
            return self._answer(0, frozenset(), "trivial")
        delta = g.min_degree()
        if delta == 0:
            return self._answer(0, frozenset({g.min_degree_vertex()}), "min-degree")
        d0 = degree_range(delta, g.n)
        best, side, source = delta, frozenset({g.min_degree_vertex()}), "min-degree"
        for r in self.reps:
            val, s = r.value(d0, self.stats)
            if val < best:
                best, side, source = val, s, f"repetition {r.t}"
        if not self.eager:
            keep = {d0, d0 * 2, max(d0 // 2, 1)}
            for r in self.reps:
                r.evict(keep)
        return self._answer(int(best), side, source)

    def _answer(self, lam: int, side, source: str) -> ConnectivityAnswer:
        self._side = side if self.report_cuts else None
        witness = self.g.cut_edges(side) if self.report_cuts else None
        self.last = ConnectivityAnswer(lam, witness, source)
        return self.last

    def report_cut(self, nonsingleton: bool = False) -> list:
        """Edges of a minimum cut; only sound against an oblivious adversary."""
        if not self.report_cuts:
            raise WitnessDisabled("engine was built with report_cuts=False")
        ans = self.last if self.last is not None else self.query()
        edges = self.g.cut_edges(self._side)
        if nonsingleton and ans.source == "min-degree" and ans.lam > 0:
            raise NoWitness("minimum came from the degree cut", edges)
        return edges

    def work(self) -> int:
        return sum(r.work() for r in self.reps)

    def state_hash(self) -> str:
        """Hash of G and every sketch row; independent of 2-out sampling state."""
        h = hashlib.sha256(self.g.state_hash().encode())
        for r in self.reps:
            for d0 in sorted(r.ranges):
                for bid in r.ranges[d0].bids:
                    h.update(r.forest.banks[bid].rows.tobytes())
        return h.hexdigest()

    def audit(self) -> bool:
        return all(r.two.check() and r.forest.audit() for r in self.reps)
