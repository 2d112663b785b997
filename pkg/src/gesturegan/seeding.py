"""Deterministic seed derivation shared by training and evaluation code."""

import hashlib


def derive_seed(base_seed: int, *tags) -> int:
    """Derive a child seed from ``base_seed`` and a tag path.

    Hash-based so that unrelated consumers (batch shuffling, repeat runs,
    sampling) get independent streams, and stable across platforms and
    process restarts. The result fits in 32 bits, which every RNG we use
    (numpy, torch, python) accepts.
    """
    payload = repr((int(base_seed),) + tuple(str(t) for t in tags)).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:4], "big")
