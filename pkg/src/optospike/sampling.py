"""Deterministic random-stream derivation.

Every stochastic operation in the package is a pure function of its inputs
and an integer seed. Independent substreams are derived from (seed, *path)
through numpy's SeedSequence, so a Monte Carlo run can be split across any
number of workers and still produce bit-identical results: trial t always
draws from the stream keyed (seed, t), no matter which worker owns it.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _norm(value: int) -> int:
    return int(value) & _MASK64


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream deterministically keyed by (seed, *path)."""
    key = [_norm(seed)] + [_norm(p) for p in path]
    return np.random.default_rng(np.random.SeedSequence(key))


def trial_streams(seed: int, n_trials: int) -> list[np.random.Generator]:
    """One independent generator per Monte Carlo trial, keyed (seed, t)."""
    return [substream(seed, t) for t in range(n_trials)]
