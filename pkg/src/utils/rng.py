# rng.py
from __future__ import annotations
from typing import Union

import numpy as np

_SeedLike = Union[None, int, np.random.SeedSequence]


def _normalize_seed(seed: _SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        return np.random.SeedSequence(int(seed))
    return np.random.SeedSequence()


def trial_generators(seed: _SeedLike, trials: int) -> list[np.random.Generator]:
    """One counter-based Philox stream per trial; stream i depends only on (seed, i)."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    children = _normalize_seed(seed).spawn(trials)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def trial_generator(seed: _SeedLike, index: int) -> np.random.Generator:
    """Stream ``index`` alone, identical to ``trial_generators(seed, n)[index]`` for any n > index."""
    root = _normalize_seed(seed)
    child = np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (index,))
    return np.random.Generator(np.random.Philox(child))
