"""Counter-based random streams: one independent Philox stream per trial index.

A trial's stream depends only on (seed, trial), so results do not depend on how
trials are split between workers.
"""

from __future__ import annotations

import numpy as np

SEED_BITS = 64


def _check_seed(seed: int) -> int:
    if not 0 <= seed < 2**SEED_BITS:
        raise ValueError(f"seed must be a {SEED_BITS}-bit unsigned integer, got {seed}")
    return int(seed)


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Generator for trial `trial` under master seed `seed`."""
    sequence = np.random.SeedSequence(entropy=_check_seed(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(sequence))


def chunk_ranges(trials: int, workers: int) -> list[range]:
    """Split 0..trials-1 into at most `workers` contiguous ranges."""
    workers = max(1, min(workers, trials))
    size, extra = divmod(trials, workers)
    ranges: list[range] = []
    start = 0
    for w in range(workers):
        stop = start + size + (1 if w < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges
