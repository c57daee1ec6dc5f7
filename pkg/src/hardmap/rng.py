"""Deterministic RNG derivation.

Every stochastic step owns a generator derived from the global seed plus a
tuple of string tags, so results never depend on evaluation order.
"""

import zlib

import numpy as np


def spawn_rng(seed, *tags):
    """Return a Generator keyed by (seed, tags); stable across runs and platforms."""
    key = tuple(zlib.crc32(str(t).encode("utf-8")) for t in tags)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))
