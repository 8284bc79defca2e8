"""Deterministic RNG stream derivation.

All randomness in a pipeline flows from one root seed. Independent streams
are derived as PCG64 generators keyed by (root_seed, stream_id, *indices),
so reruns with the same config and seed reproduce every artifact exactly.
"""

from __future__ import annotations

import numpy as np

STREAM_GRAPH = 1
STREAM_CASCADES = 2
STREAM_CHAIN = 3
STREAM_CELL = 4


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *path])))


def derive_seed(seed: int, *path: int) -> int:
    """Collapse a stream key to a plain integer seed (for ChainConfig)."""
    return int(np.random.SeedSequence([seed, *path]).generate_state(1)[0])
