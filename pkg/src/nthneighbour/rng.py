"""Seeded, splittable random streams.

Every stream is a numpy ``Generator`` over PCG64, keyed by a 64-bit seed
and an optional tuple of substream indices.  Substream ``i`` of seed ``s``
is the same on every platform and independent of how work is scheduled.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

ALGORITHM = "PCG64"
SEED_MAX = 2**64 - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ParameterError(f"seed must satisfy 0 <= seed < 2**64, got {seed}")
    return seed


def make_stream(seed: int = 0, *substream: int) -> np.random.Generator:
    """Generator for ``seed``; extra integers select a child substream."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(i) for i in substream))
    return np.random.Generator(np.random.PCG64(ss))


def open_uniform(rng: np.random.Generator, size=None):
    """Uniform draws on the open interval (0, 1).

    ``Generator.random`` can return exactly 0.0; such draws are replaced by
    fresh ones so downstream logs and power transforms stay finite.
    """
    u = rng.random(size)
    if size is None:
        while u == 0.0:
            u = rng.random()
        return u
    bad = u == 0.0
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    return u
