"""Labelled seed splitting: every random stream derives from one root seed."""
from __future__ import annotations

import hashlib

import numpy as np


def _label_word(label) -> int:
    return int.from_bytes(hashlib.blake2b(repr(label).encode(), digest_size=4).digest(), "little")


def seed_sequence(seed: int, *labels) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(seed) >> 32 & 0xFFFFFFFF,
                                   *(_label_word(x) for x in labels)])


def stream(seed: int, *labels) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *labels))


def derive_seed(seed: int, *labels) -> int:
    return int(seed_sequence(seed, *labels).generate_state(2, np.uint32).view(np.uint64)[0])


_MASK = (1 << 64) - 1


def mix64(x: int) -> int:
    """splitmix64 finaliser."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)
