"""Deterministic fully dynamic edge connectivity with a threshold switch.

Two estimators ingest every update: a small-connectivity engine that is exact
while lambda <= tau + 1, and the sparsifier estimator min(delta, lambda(H'))
that is exact while phi = phi_const / tau >= phi_const / delta. After each
update the answering engine's value decides which one serves the next query.
"""
from __future__ import annotations

import math

from .graph import DynGraph
from .oracle import capped_mincut, stoer_wagner
from .rand_engine import ConnectivityAnswer
from .sparsifier import DynSparsifier


def default_tau(m: int, n: int, exps=(1 / 8, 1 / 16)) -> int:
    if n < 1:
        return 1
    return max(1, math.ceil(m ** exps[0] / n ** exps[1]))


class SmallCutEngine:
    """Interface: exact lambda whenever lambda <= eta, otherwise any value > eta."""

    eta: int

    def update(self, u: int, v: int, inserted: bool) -> None:
        raise NotImplementedError

    def current_lambda(self) -> int:
        raise NotImplementedError

    def set_eta(self, eta: int) -> None:
        self.eta = eta


class CappedRecompute(SmallCutEngine):
    """Recompute lambda from scratch with a cap; returns eta + 1 above the cap."""

    def __init__(self, g: DynGraph, eta: int):
        self.g = g.copy()
        self.eta = eta
        self._cache = None
        self.work = 0

    def update(self, u: int, v: int, inserted: bool) -> None:
        self.g.update(u, v, inserted)
        self._cache = None

    def set_eta(self, eta: int) -> None:
        self.eta = eta
        self._cache = None

    def current_lambda(self) -> int:
        if self._cache is None:
            g = self.g
            if g.n < 2 or g.min_degree() == 0:
                self._cache = 0
            else:
                val = capped_mincut(g, self.eta)
                self._cache = self.eta + 1 if val is None else val
            self.work += self.g.n ** 2
        return self._cache


class ValidityError(AssertionError):
    """The sparsifier estimator answered outside its validity window."""


class DetEngine:
    def __init__(self, g: DynGraph | int, phi_const: float = 240, tau: int | None = None,
                 exps=(1 / 8, 1 / 16), small: SmallCutEngine | None = None,
                 report_cuts: bool = False):
        self.g = DynGraph(g) if isinstance(g, int) else g.copy()
        self.phi_const = phi_const
        self.exps = exps
        self.fixed_tau = tau
        self.report_cuts = report_cuts
        self.tau = tau if tau is not None else default_tau(self.g.m, self.g.n, exps)
        self.a1 = small if small is not None else CappedRecompute(self.g, self.tau + 1)
        self.sparsifier = DynSparsifier(self.g, self._phi_for, self._rebuilt)
        lam = self._exact()
        self.active = "A1" if lam <= self.tau else "A2"
        self.lam = lam
        self.switches = 0
        self._side = None

    @property
    def eta(self) -> int:
        return self.tau + 1

    @property
    def phi(self):
        return self.phi_const / self.tau

    def _phi_for(self, g: DynGraph):
        if self.fixed_tau is None and hasattr(self, "a1"):
            self.tau = default_tau(g.m, g.n, self.exps)
            self.a1.set_eta(self.tau + 1)
        return self.phi_const / self.tau

    def _rebuilt(self, sp) -> None:
        if hasattr(self, "active"):
            # tau may have moved: pick the engine from the exact current value
            self.active = "A1" if self._exact() <= self.tau else "A2"

    def _exact(self) -> int:
        g = self.g
        if g.n < 2 or g.min_degree() == 0:
            return 0
        return stoer_wagner(g).value

    def _a2(self) -> tuple[int, frozenset | None]:
        g = self.g
        if g.n < 2:
            return 0, None
        delta = g.min_degree()
        side = frozenset({g.min_degree_vertex()})
        h = self.sparsifier.export()
        if len(h.vertices) < 2:
            return delta, side
        res = stoer_wagner(h)
        if res.value < delta:
            return res.value, frozenset(self.sparsifier.contraction().lift(res.side))
        return delta, side

    def update(self, u: int, v: int, inserted: bool) -> None:
        before = self.lam
        self.g.update(u, v, inserted)
        self.a1.update(u, v, inserted)
        rebuilt = self.sparsifier.update(u, v, inserted)
        if self.active == "A1":
            lam = self.a1.current_lambda()
            if lam > self.tau + 1:
                raise ValidityError(f"small-cut engine saw lambda {lam} > eta {self.tau + 1}")
            self._side = None
        else:
            if before < self.tau and not rebuilt:
                raise ValidityError(f"sparsifier answered with lambda {before} < tau {self.tau}")
            lam, self._side = self._a2()
        self.lam = lam
        nxt = "A1" if lam <= self.tau else "A2"
        if nxt != self.active:
            self.switches += 1
            self.active = nxt

    def insert(self, u: int, v: int) -> None:
        self.update(u, v, True)

    def delete(self, u: int, v: int) -> None:
        self.update(u, v, False)

    def query(self) -> ConnectivityAnswer:
        witness = None
        if self.report_cuts:
            side = self._side
            if side is None:
                side = stoer_wagner(self.g).side if self.g.n >= 2 else frozenset()
            witness = self.g.cut_edges(side)
        return ConnectivityAnswer(self.lam, witness, self.active)

    def work(self) -> int:
        return self.sparsifier.work + getattr(self.a1, "work", 0)
