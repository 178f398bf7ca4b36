"""Seed-path derivation shared by every stochastic component.

All randomness in the package flows from explicit integer seeds through
numpy ``SeedSequence`` paths: distinct consumers (channel draws vs. noise
draws, trial i vs. trial j) get statistically independent streams, and any
result can be regenerated bit for bit from its seed path alone. Nothing in
the package ever seeds from the wall clock or the OS entropy pool.
"""

from __future__ import annotations

from typing import Union

import numpy as np

# Top-level stream tags: channel randomness (shifts + attenuations) and
# additive noise are kept in disjoint seed domains.
CHANNEL_STREAM = 0
NOISE_STREAM = 1

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def as_rng(seed: SeedLike) -> np.random.Generator:
    """Coerce an int, SeedSequence, or Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def subseed(master_seed: int, *path: int) -> np.random.SeedSequence:
    """SeedSequence for ``master_seed`` refined by an integer derivation path.

    The same (master_seed, path) always yields the same stream; distinct
    paths yield independent streams, which is what makes trial-parallel
    execution order-insensitive.
    """
    return np.random.SeedSequence([int(master_seed), *(int(p) for p in path)])
