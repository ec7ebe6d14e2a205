"""Seeded, order-independent random streams.

Every stream is a Philox (counter-based) generator keyed by the user seed plus
a spawn key, so trial ``k`` of a suite draws the same numbers no matter which
other trials ran before it.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed=None, *key: int) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        if key:
            raise TypeError("spawn keys need an integer seed")
        return seed
    seq = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
