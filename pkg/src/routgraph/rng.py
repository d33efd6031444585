"""Seeding and stream derivation.

Every random quantity in this package is drawn from a numpy ``Generator``
backed by the PCG64 bit generator.  A seed is a 64-bit unsigned integer.
Independent sub-streams (per trial, per worker, per purpose) are derived
with :func:`derive_seed`, which feeds the parent seed together with the
derivation tokens through ``numpy.random.SeedSequence`` (a documented,
collision-resistant integer mixer).  Derivation is pure: the same inputs
always yield the same child seed, regardless of call order or scheduling.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    """Validate a 64-bit unsigned seed and return it unchanged."""
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, 2^64), got {seed}")
    return seed


def derive_seed(seed: int, *tokens: int) -> int:
    """Derive a child seed from ``seed`` and integer derivation tokens.

    The mixer is ``numpy.random.SeedSequence`` applied to the tuple
    ``(seed, *tokens)``; the child seed is the first 64 bits of its
    output state.  Used for per-trial seeds in sweeps
    (``derive_seed(master, n, r, trial)``) and for sub-purpose streams.
    """
    check_seed(seed)
    entropy = (int(seed),) + tuple(int(t) for t in tokens)
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint64)[0])


def make_generator(seed: int) -> np.random.Generator:
    """PCG64 generator for a validated 64-bit seed."""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def substreams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for ``count`` parallel sub-tasks of one seed."""
    return [make_generator(derive_seed(seed, i)) for i in range(count)]
