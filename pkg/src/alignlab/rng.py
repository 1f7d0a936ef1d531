"""Deterministic seed derivation for reproducible sampling.

Every random object in the library is a pure function of an integer seed.
Sub-streams (per replicate, per tree class, per rejection attempt) are
derived from the parent seed plus a string label, hashed with sha256 so
the derivation does not depend on Python's randomized string hashing and
is stable across platforms and runs.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derived_seed_sequence", "derived_rng", "derived_seed"]


def _label_words(label) -> tuple[int, ...]:
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    # 4 x 32-bit words are plenty of spawn-key entropy per label
    return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))


def derived_seed_sequence(seed: int, *labels) -> np.random.SeedSequence:
    """SeedSequence for (seed, labels), independent across distinct labels."""
    key: tuple[int, ...] = ()
    for label in labels:
        key = key + _label_words(label)
    return np.random.SeedSequence(entropy=seed, spawn_key=key)


def derived_rng(seed: int, *labels) -> np.random.Generator:
    """PCG64 generator on the (seed, labels) stream."""
    return np.random.Generator(np.random.PCG64(derived_seed_sequence(seed, *labels)))


def derived_seed(seed: int, *labels) -> int:
    """Plain integer seed derived from (seed, labels), usable as a new root seed."""
    state = derived_seed_sequence(seed, *labels).generate_state(2, np.uint64)
    return int((int(state[0]) ^ (int(state[1]) << 1)) & 0x7FFFFFFFFFFFFFFF)
