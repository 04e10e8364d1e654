"""Exact static minimum cuts: Stoer-Wagner, brute force enumeration, capped queries."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import DynGraph, MultiGraph

BRUTE_FORCE_MAX = 16


class TooSmall(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class CutResult:
    value: int
    side: frozenset


@njit(cache=True)
def _sw_phases(w, stop_at):
    n = w.shape[0]
    w = w.copy()
    alive = np.ones(n, dtype=np.bool_)
    cut_values = np.full(n - 1, -1, dtype=np.int64)
    merged_s = np.full(n - 1, -1, dtype=np.int64)
    merged_t = np.full(n - 1, -1, dtype=np.int64)
    best = np.int64(1) << 62
    for phase in range(n - 1):
        key = np.zeros(n, dtype=np.int64)
        in_a = np.zeros(n, dtype=np.bool_)
        remaining = n - phase
        prev = -1
        last = -1
        last_key = 0
        for step in range(remaining):
            sel = -1
            top = -1
            for x in range(n):
                if alive[x] and not in_a[x] and key[x] > top:
                    top = key[x]
                    sel = x
            in_a[sel] = True
            prev = last
            last = sel
            last_key = key[sel]
            for x in range(n):
                key[x] += w[sel, x]
        cut_values[phase] = last_key
        merged_s[phase] = prev
        merged_t[phase] = last
        for x in range(n):
            w[prev, x] += w[last, x]
            w[x, prev] += w[x, last]
        w[prev, prev] = 0
        alive[last] = False
        if last_key < best:
            best = last_key
        if best <= stop_at:
            break
    return cut_values, merged_s, merged_t


def stoer_wagner_dense(w: np.ndarray, stop_at: int = -1) -> tuple[int, list[int]]:
    """Global min cut of a symmetric integer weight matrix; returns (value, side rows)."""
    n = w.shape[0]
    if n < 2:
        raise TooSmall("need at least two vertices")
    cuts, ms, mt = _sw_phases(np.ascontiguousarray(w, dtype=np.int64), stop_at)
    done = int(np.count_nonzero(cuts >= 0))
    best = int(np.argmin(cuts[:done]))
    groups = {i: [i] for i in range(n)}
    for p in range(best):
        groups[int(ms[p])].extend(groups.pop(int(mt[p])))
    return int(cuts[best]), groups[int(mt[best])]


def _as_multigraph(g) -> MultiGraph:
    return MultiGraph.from_graph(g) if isinstance(g, DynGraph) else g


def stoer_wagner(g) -> CutResult:
    """Exact global minimum cut with a witness side; 0 on disconnected inputs."""
    g = _as_multigraph(g)
    value, rows = stoer_wagner_dense(g.dense())
    return CutResult(value, frozenset(g.vertices[i] for i in rows))


def edge_connectivity(g) -> int:
    """lambda(g); 0 for graphs with fewer than two vertices."""
    g = _as_multigraph(g)
    if len(g.vertices) < 2:
        return 0
    return stoer_wagner(g).value


def all_cut_values(g) -> tuple[np.ndarray, list]:
    """Cut value of every bipartition; mask bit i is vertex ``g.vertices[i]``.

    The last vertex is pinned to the complement side, so masks range over
    ``1 .. 2**(n-1) - 1``.
    """
    g = _as_multigraph(g)
    n = len(g.vertices)
    if n > BRUTE_FORCE_MAX:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_MAX} vertices, got {n}")
    index = {v: i for i, v in enumerate(g.vertices)}
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    vals = np.zeros(len(masks), dtype=np.int64)
    for (a, b), w in g.weights.items():
        vals += w * (((masks >> index[a]) ^ (masks >> index[b])) & 1)
    return masks, vals


def popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    c = np.zeros_like(x)
    while x.any():
        c += x & 1
        x = x >> 1
    return c


def brute_force_mincut(g, nonsingleton_only: bool = False) -> CutResult:
    g = _as_multigraph(g)
    n = len(g.vertices)
    if n < 2:
        raise TooSmall("need at least two vertices")
    masks, vals = all_cut_values(g)
    if nonsingleton_only:
        pc = popcount(masks)
        keep = (pc >= 2) & (n - pc >= 2)
        if not keep.any():
            raise TooSmall("no non-singleton bipartition exists")
        masks, vals = masks[keep], vals[keep]
    i = int(np.argmin(vals))
    side = frozenset(g.vertices[j] for j in range(n) if masks[i] >> j & 1)
    return CutResult(int(vals[i]), side)


def capped_mincut(g, cap: int) -> int | None:
    """lambda(g) if it is at most ``cap``, otherwise None."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    g = _as_multigraph(g)
    if len(g.vertices) < 2:
        return 0
    value, _ = stoer_wagner_dense(g.dense(), stop_at=0)
    return value if value <= cap else None
