"""Forest over V with per-component sketch aggregates, and sketch-driven Boruvka."""
from __future__ import annotations

from collections import deque

import numpy as np

from .sketch import (PRIME, STATUS_EMPTY, STATUS_NONZERO, Sketch, SketchBank,
                     SketchTransform)


class WouldCreateCycle(ValueError):
    pass


class NotForestEdge(ValueError):
    pass


class UnknownComponent(KeyError):
    pass


class SketchFailure(RuntimeError):
    """Sketch decoding kept failing after the retry budget was spent."""


class ComponentForest:
    """Forest F over 0..n-1 whose components carry summed row sketches.

    Components are explicit member sets; link relabels the smaller side and
    cut walks the forest to find one side, so both cost O(size of the smaller
    side) vertex moves plus one aggregate addition per registered bank.
    """

    def __init__(self, n: int):
        self.n = n
        self.comp = list(range(n))
        self.members: dict[int, set[int]] = {v: {v} for v in range(n)}
        self.fadj: list[set[int]] = [set() for _ in range(n)]
        self.banks: dict[int, SketchBank] = {}
        self.aggs: dict[int, dict[int, np.ndarray]] = {}
        self._next_cid = n
        self._next_bank = 0
        self.work = 0

    # -- banks --------------------------------------------------------------
    def register(self, bank: SketchBank) -> int:
        bid = self._next_bank
        self._next_bank += 1
        self.banks[bid] = bank
        self.aggs[bid] = {c: bank.rows[sorted(ms)].sum(axis=0) for c, ms in self.members.items()}
        return bid

    def unregister(self, bid: int) -> None:
        del self.banks[bid]
        del self.aggs[bid]

    # -- structure ----------------------------------------------------------
    def find(self, u: int) -> int:
        return self.comp[u]

    def connected(self, u: int, v: int) -> bool:
        return self.comp[u] == self.comp[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.fadj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.fadj[u] if u < v]

    def components(self) -> list[set[int]]:
        return list(self.members.values())

    def link(self, u: int, v: int) -> int:
        a, b = self.comp[u], self.comp[v]
        if a == b:
            raise WouldCreateCycle(f"{u} and {v} already share a component")
        if len(self.members[a]) < len(self.members[b]):
            a, b = b, a
        moved = self.members.pop(b)
        for x in moved:
            self.comp[x] = a
        self.members[a] |= moved
        for aggs in self.aggs.values():
            aggs[a] += aggs.pop(b)
        self.fadj[u].add(v)
        self.fadj[v].add(u)
        self.work += len(moved)
        return a

    def _side(self, start: int, cap: int) -> set[int] | None:
        seen = {start}
        q = deque([start])
        while q:
            x = q.popleft()
            for y in self.fadj[x]:
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        return None
                    q.append(y)
        return seen

    def cut(self, u: int, v: int) -> tuple[int, int]:
        """Delete forest edge (u, v); returns the two component ids."""
        if v not in self.fadj[u]:
            raise NotForestEdge(f"({u},{v}) is not a forest edge")
        self.fadj[u].discard(v)
        self.fadj[v].discard(u)
        old = self.comp[u]
        half = len(self.members[old]) // 2
        side = self._side(u, half)
        if side is None:
            side = self._side(v, half + 1)
        cid = self._next_cid
        self._next_cid += 1
        self.members[old] -= side
        self.members[cid] = side
        for x in side:
            self.comp[x] = cid
        rows = sorted(side)
        for bid, aggs in self.aggs.items():
            part = self.banks[bid].rows[rows].sum(axis=0)
            aggs[cid] = part
            aggs[old] -= part
        self.work += len(side)
        return old, cid

    def reset(self, edges) -> None:
        """Replace F by the given acyclic edge set and recompute all aggregates."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        self.fadj = [set() for _ in range(self.n)]
        for u, v in edges:
            a, b = find(u), find(v)
            if a == b:
                raise WouldCreateCycle(f"({u},{v}) closes a cycle")
            parent[b] = a
            self.fadj[u].add(v)
            self.fadj[v].add(u)
        groups: dict[int, set[int]] = {}
        for x in range(self.n):
            groups.setdefault(find(x), set()).add(x)
        self.members = {}
        for ms in groups.values():
            cid = self._next_cid
            self._next_cid += 1
            self.members[cid] = ms
            for x in ms:
                self.comp[x] = cid
        for bid in self.banks:
            rows = self.banks[bid].rows
            self.aggs[bid] = {c: rows[sorted(ms)].sum(axis=0) for c, ms in self.members.items()}
        self.work += self.n

    # -- sketches -----------------------------------------------------------
    def aggregate(self, cid: int, bid: int) -> np.ndarray:
        if cid not in self.members:
            raise UnknownComponent(cid)
        return self.aggs[bid][cid]

    def component_sketch(self, cid: int, bid: int, k: int = 0) -> Sketch:
        agg = self.aggregate(cid, bid)
        t = self.banks[bid].transform
        if t.count > 1:
            t = t.single(k)
        d = agg[k].copy()
        d[..., 2] %= PRIME
        return Sketch(t, d)

    def on_graph_update(self, u: int, v: int, inserted: bool, bids=None) -> None:
        a, b = (u, v) if u < v else (v, u)
        ca, cb = self.comp[a], self.comp[b]
        for bid in (self.banks if bids is None else bids):
            delta = self.banks[bid].update(a, b, inserted)
            if ca != cb:
                aggs = self.aggs[bid]
                aggs[ca] += delta
                aggs[cb] -= delta

    def audit(self) -> bool:
        """Recompute every aggregate from the rows and compare."""
        for bid, aggs in self.aggs.items():
            rows = self.banks[bid].rows
            if set(aggs) != set(self.members):
                return False
            for c, ms in self.members.items():
                fresh = rows[sorted(ms)].sum(axis=0)
                a = aggs[c]
                if not (np.array_equal(fresh[..., :2], a[..., :2])
                        and np.array_equal(fresh[..., 2] % PRIME, a[..., 2] % PRIME)):
                    return False
        return True


def boruvka_forest(sketches: np.ndarray, transform: SketchTransform, locate,
                   ks=None, retries: int = 3, stats: dict | None = None):
    """Spanning forest of the sketched graph on ``S`` supervertices.

    ``sketches[s, p]`` is supervertex ``s``'s sketch under copy ``p``
    (transform index ``ks[p]``); phase ``p`` decodes with copy ``p`` only.
    ``locate(edge_index)`` maps a decoded edge to its supervertex pair or
    None. Returns a list of ``(a, b, edge_index)``.
    """
    S, L = sketches.shape[:2]
    ks = list(range(L)) if ks is None else list(ks)
    if S <= 1:
        return []
    parent = list(range(S))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    agg = sketches.copy()
    active = list(range(S))
    forest = []
    phase = 0
    while True:
        p = phase if phase < L else (phase - L) % L
        roots = np.array(active)
        status, index, _ = transform.decode_arrays(agg[roots, p], ks[p])
        if stats is not None:
            stats["decodes"] = stats.get("decodes", 0) + len(roots)
        live = status != STATUS_EMPTY
        if not live.any():
            return forest
        if phase >= L + retries:
            raise SketchFailure(f"{int(live.sum())} components undecided after {phase} phases")
        phase += 1
        roots, status, index = roots[live], status[live], index[live]
        picks = []
        for r, st, idx in zip(roots.tolist(), status.tolist(), index.tolist()):
            if st != STATUS_NONZERO:
                picks.append((r, None))
                continue
            ends = locate(idx)
            if ends is None:
                picks.append((r, None))
                continue
            ra, rb = find(ends[0]), find(ends[1])
            if (ra == r) == (rb == r):
                picks.append((r, None))
                continue
            picks.append((r, (ends[0], ends[1], idx)))
        nxt = []
        for r, e in picks:
            if e is not None:
                x, y = find(e[0]), find(e[1])
                if x != y:
                    if x > y:
                        x, y = y, x
                    parent[y] = x
                    agg[x] += agg[y]
                    forest.append(e)
        for r, _ in picks:
            nxt.append(find(r))
        active = sorted(set(nxt))
