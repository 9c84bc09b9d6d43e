"""Named, splittable random streams.

A stream is keyed by ``(master seed, key...)``; the key is hashed with
SHA-256 so streams never depend on scheduling order or Python's hash seed.
"""

import hashlib

import numpy as np


def _key_words(key) -> list:
    digest = hashlib.sha256(repr(tuple(key)).encode()).digest()
    return [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]


def stream(seed: int, *key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(seed) >> 32, *_key_words(key)]))
