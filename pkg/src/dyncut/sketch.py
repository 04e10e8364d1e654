"""Linear l0-sampling sketches of signed edge-indexed vectors.

A transform holds ``count`` independent sketch functions over the edge index
space of an ``n``-vertex graph. Each sketch function has ``stacks`` independent
level stacks; level ``l`` samples a coordinate with probability ``2**-l`` using
its own pairwise-independent hash, and stores

    (sum of values, sum of index * value, sum of value * r**index  mod P)

so that a level holding exactly one non-zero coordinate can be recognised and
decoded. Everything is integer arithmetic, so sketches add exactly.
"""
from __future__ import annotations

import itertools
import math
from typing import NamedTuple

import numpy as np

from .graph import DynGraph, canon
from .rng import stream

PRIME = (1 << 31) - 1
CHUNK = 256

_ids = itertools.count()


class TransformMismatch(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class NonZero(NamedTuple):
    index: int
    sign: int


class _Outcome:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


EMPTY = _Outcome("Empty")
FAIL = _Outcome("Fail")

STATUS_EMPTY, STATUS_NONZERO, STATUS_FAIL = 0, 1, 2


def powmod(base, exp, mod: int = PRIME) -> np.ndarray:
    """Elementwise ``base ** exp % mod`` for int64 arrays (mod < 2**31)."""
    base, exp = np.broadcast_arrays(np.asarray(base, dtype=np.int64) % mod,
                                    np.asarray(exp, dtype=np.int64))
    b = base.copy()
    e = exp.copy()
    out = np.ones(b.shape, dtype=np.int64)
    while e.size and e.max() > 0:
        odd = (e & 1).astype(bool)
        out[odd] = out[odd] * b[odd] % mod
        b = b * b % mod
        e >>= 1
    return out


class SketchTransform:
    """``count`` independent sketch functions for graphs on ``n`` vertices.

    Fully determined by ``(seed, n, count, stacks)``.
    """

    def __init__(self, seed: int, n: int, count: int = 1, stacks: int = 3):
        if n < 2:
            raise ValueError("sketch transforms need n >= 2")
        self.seed, self.n, self.count, self.stacks = seed, n, count, stacks
        self.dimension = n * (n - 1) // 2
        self.levels = math.ceil(math.log2(self.dimension)) + 1
        rng = stream(seed, "l0-transform", n, count, stacks)
        shape = (count, stacks, self.levels)
        self.a = rng.integers(1, PRIME, size=shape, dtype=np.int64)
        self.b = rng.integers(0, PRIME, size=shape, dtype=np.int64)
        self.r = rng.integers(2, PRIME - 1, size=(count, stacks), dtype=np.int64)
        self.thresholds = np.array([PRIME >> lvl for lvl in range(self.levels)], dtype=np.int64)
        # r**j and r**(j*n) for j < n, so r**(u*n + v) is one product
        self.pow_lo = np.empty((count, stacks, n), dtype=np.int64)
        self.pow_lo[..., 0] = 1
        for j in range(1, n):
            self.pow_lo[..., j] = self.pow_lo[..., j - 1] * self.r % PRIME
        rn = self.pow_lo[..., n - 1] * self.r % PRIME
        self.pow_hi = np.empty_like(self.pow_lo)
        self.pow_hi[..., 0] = 1
        for j in range(1, n):
            self.pow_hi[..., j] = self.pow_hi[..., j - 1] * rn % PRIME
        self.uid = next(_ids)

    @property
    def cell_shape(self) -> tuple[int, int, int]:
        return (self.stacks, self.levels, 3)

    def edge_index(self, u: int, v: int) -> int:
        u, v = canon(u, v)
        return u * self.n + v

    def edge_of(self, index: int) -> tuple[int, int]:
        return divmod(int(index), self.n)

    def _check_index(self, index) -> None:
        idx = np.asarray(index)
        u, v = np.divmod(idx, self.n)
        if np.any((idx < 0) | (u >= v) | (v >= self.n)):
            raise IndexOutOfRange(f"edge index outside the {self.n}-vertex pair space")

    def units(self, indices, signs, ks=slice(None)) -> np.ndarray:
        """Sketches of ``signs[e] * unit(indices[e])`` under transforms ``ks``.

        Shape ``(E, K, stacks, levels, 3)``; an integer ``ks`` drops the K axis.
        """
        if isinstance(ks, (int, np.integer)):
            return self.units(indices, signs, slice(ks, ks + 1))[:, 0]
        idx = np.asarray(indices, dtype=np.int64)
        sg = np.asarray(signs, dtype=np.int64)
        a, b, r = self.a[ks], self.b[ks], self.r[ks]
        ii = idx[:, None, None, None]
        inl = ((a[None] * ii + b[None]) % PRIME < self.thresholds).astype(np.int64)
        hu, lv = np.divmod(idx, self.n)
        pw = np.moveaxis(self.pow_hi[ks][..., hu] * self.pow_lo[ks][..., lv] % PRIME, -1, 0)
        s4 = sg[:, None, None, None]
        out = np.empty(inl.shape + (3,), dtype=np.int64)
        out[..., 0] = inl * s4
        out[..., 1] = inl * s4 * ii
        out[..., 2] = inl * ((s4 * pw[..., None]) % PRIME)
        return out

    def decode_arrays(self, arr: np.ndarray, k: int = 0):
        """Vectorised decode of sketches ``arr[..., stacks, levels, 3]`` under transform ``k``.

        Returns ``(status, index, sign)`` arrays over the leading axes.
        """
        cnt = arr[..., 0]
        tot = arr[..., 1]
        fp = arr[..., 2] % PRIME
        lead = arr.shape[:-3]
        empty = ~((cnt != 0) | (tot != 0) | (fp != 0)).reshape(lead + (-1,)).any(axis=-1)
        nz = cnt != 0
        safe = np.where(nz, cnt, 1)
        cand = np.where(nz & (tot % safe == 0), tot // safe, -1)
        u, v = np.divmod(cand, self.n)
        ok = nz & (cand >= 0) & (u < v)
        cand = np.where(ok, cand, 0)
        member = (self.a[k] * cand + self.b[k]) % PRIME < self.thresholds
        s_idx = np.arange(self.stacks)[:, None]
        cu, cv = np.divmod(cand, self.n)
        expect = (cnt % PRIME) * (self.pow_hi[k][s_idx, cu] * self.pow_lo[k][s_idx, cv] % PRIME) % PRIME
        ok &= member & (expect == fp)
        flat = ok.reshape(lead + (-1,))
        hit = flat.any(axis=-1)
        first = flat.argmax(axis=-1)
        index = np.take_along_axis(cand.reshape(lead + (-1,)), first[..., None], -1)[..., 0]
        sign = np.sign(np.take_along_axis(cnt.reshape(lead + (-1,)), first[..., None], -1)[..., 0])
        status = np.where(empty, STATUS_EMPTY, np.where(hit, STATUS_NONZERO, STATUS_FAIL))
        return status, np.where(hit, index, -1), np.where(hit, sign, 0)

    def single(self, k: int) -> "SketchTransform":
        """View of the k-th sketch function as a count-1 transform."""
        t = object.__new__(SketchTransform)
        t.__dict__.update(self.__dict__)
        t.count = 1
        t.a, t.b, t.r = self.a[k:k + 1], self.b[k:k + 1], self.r[k:k + 1]
        t.pow_lo, t.pow_hi = self.pow_lo[k:k + 1], self.pow_hi[k:k + 1]
        t.uid = (self.uid, k)
        return t

    def __repr__(self) -> str:
        return f"SketchTransform(n={self.n}, count={self.count}, stacks={self.stacks}, levels={self.levels})"


class Sketch:
    __slots__ = ("data", "transform")

    def __init__(self, transform: SketchTransform, data: np.ndarray | None = None):
        self.transform = transform
        self.data = np.zeros(transform.cell_shape, dtype=np.int64) if data is None else data

    def _same(self, other: "Sketch") -> None:
        if self.transform.uid != other.transform.uid:
            raise TransformMismatch("sketches come from different transforms")

    def __add__(self, other: "Sketch") -> "Sketch":
        self._same(other)
        d = self.data + other.data
        d[..., 2] %= PRIME
        return Sketch(self.transform, d)

    def __neg__(self) -> "Sketch":
        d = -self.data
        d[..., 2] %= PRIME
        return Sketch(self.transform, d)

    def __sub__(self, other: "Sketch") -> "Sketch":
        return self + (-other)

    def normalized(self) -> np.ndarray:
        d = self.data.copy()
        d[..., 2] %= PRIME
        return d

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sketch):
            return NotImplemented
        return self.transform.uid == other.transform.uid and np.array_equal(
            self.normalized(), other.normalized())

    def is_zero(self) -> bool:
        return not self.normalized().any()

    def decode(self):
        status, index, sign = self.transform.decode_arrays(self.data[None])
        if status[0] == STATUS_EMPTY:
            return EMPTY
        if status[0] == STATUS_FAIL:
            return FAIL
        return NonZero(int(index[0]), int(sign[0]))

    def __repr__(self) -> str:
        return f"Sketch(zero={self.is_zero()})"


def new_transform(seed: int, n: int, stacks: int = 3) -> SketchTransform:
    return SketchTransform(seed, n, 1, stacks)


def zero_sketch(t: SketchTransform) -> Sketch:
    return Sketch(t)


def unit_sketch(t: SketchTransform, edge_index: int, sign: int = 1) -> Sketch:
    t._check_index(edge_index)
    return Sketch(t, t.units([edge_index], [sign], 0)[0])


def sketch_vector(t: SketchTransform, vec: dict[int, int]) -> Sketch:
    """Sketch of an explicit sparse integer vector ``{index: value}``."""
    if not vec:
        return Sketch(t)
    idx = np.fromiter(vec.keys(), dtype=np.int64)
    t._check_index(idx)
    val = np.fromiter(vec.values(), dtype=np.int64)
    d = t.units(idx, val, 0).sum(axis=0)
    d[..., 2] %= PRIME
    return Sketch(t, d)


def add(a: Sketch, b: Sketch) -> Sketch:
    return a + b


def decode(s: Sketch):
    return s.decode()


class SketchBank:
    """Sketches of every incidence row ``b_u`` under all functions of one transform.

    ``rows`` has shape ``(n, count, stacks, levels, 3)``. Fingerprint cells are
    not reduced mod P on update; readers reduce.
    """

    def __init__(self, transform: SketchTransform):
        self.transform = transform
        self.n = transform.n
        self.rows = np.zeros((self.n, transform.count) + transform.cell_shape, dtype=np.int64)

    @classmethod
    def from_edges(cls, transform: SketchTransform, edges) -> "SketchBank":
        bank = cls(transform)
        edges = [canon(u, v) for u, v in edges]
        n = transform.n
        for i in range(0, len(edges), CHUNK):
            chunk = np.array(edges[i:i + CHUNK], dtype=np.int64)
            idx = chunk[:, 0] * n + chunk[:, 1]
            units = transform.units(idx, np.ones(len(idx), dtype=np.int64))
            np.add.at(bank.rows, chunk[:, 0], units)
            np.subtract.at(bank.rows, chunk[:, 1], units)
        return bank

    def unit(self, u: int, v: int) -> np.ndarray:
        """Sketch cells of the +1 unit at edge (min, max) under every function."""
        return self.transform.units([self.transform.edge_index(u, v)], [1])[0]

    def update(self, u: int, v: int, inserted: bool) -> np.ndarray:
        """Apply an edge update; returns the delta added to row ``min(u, v)``."""
        a, b = canon(u, v)
        delta = self.unit(a, b)
        if not inserted:
            delta = -delta
        self.rows[a] += delta
        self.rows[b] -= delta
        return delta

    def row(self, u: int, k: int = 0) -> Sketch:
        t = self.transform if self.transform.count == 1 else self.transform.single(k)
        d = self.rows[u, k].copy()
        d[..., 2] %= PRIME
        return Sketch(t, d)


def bank_init(t: SketchTransform, g: DynGraph) -> SketchBank:
    return SketchBank.from_edges(t, g.edges())


def bank_update(bank: SketchBank, u: int, v: int, inserted: bool) -> None:
    bank.update(u, v, inserted)
