"""Seeded random streams.

Every random draw in the package goes through a ``numpy.random.Generator``
built from a ``SeedSequence``. Independent substreams are addressed by a spawn
key, so that a trial can be reproduced from ``(seed, *key)`` alone.
"""

import numpy as np


class SEED_STREAMS:
    PRECODERS = 0
    TRIALS = 1
    ANALYSIS = 2
    SELFTEST = 3


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn_key))


def axis_value_key(value: float) -> int:
    """Map a sweep value (possibly negative or fractional) to a spawn-key entry"""
    return int(round(value * 1000)) % 2**32


def complex_normal(rng: np.random.Generator, shape: int | tuple[int, ...]) -> np.ndarray:
    """CN(0, 1) draws: real parts first as one array, then imaginary parts"""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2)
