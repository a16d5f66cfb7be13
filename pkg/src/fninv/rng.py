"""Counter-based splittable PRNG.

Every draw is a pure function of ``(master_seed, stream_id, counter)``, so
experiments replay bit-identically on any platform and under any task
scheduling. The construction is SplitMix64 keyed per stream:

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    key     = mix64(mix64(master_seed ^ SEED_SALT) + stream_id * GOLDEN)
    word[k] = mix64(key + (k + 1) * GOLDEN)          (all arithmetic mod 2^64)

``counter`` is the index of the next unread word. ``split(i)`` derives the
child stream ``mix64(stream_id ^ mix64(i + SPLIT_SALT))`` under the same
master seed, which is how parallel tasks get independent streams.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
SEED_SALT = 0x6A09E667F3BCC909
SPLIT_SALT = 0xBB67AE8584CAA73B

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def mix64(z: int) -> int:
    """Scalar SplitMix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class Rng:
    """Deterministic stream of 64-bit words.

    Args:
        master_seed: 64-bit experiment seed.
        stream_id: 64-bit stream label; use ``split`` to derive children.
    """

    __slots__ = ("master_seed", "stream_id", "_key", "counter")

    def __init__(self, master_seed: int, stream_id: int = 0):
        self.master_seed = int(master_seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self._key = (mix64(self.master_seed ^ SEED_SALT) + self.stream_id * GOLDEN) & MASK64
        self._key = mix64(self._key)
        self.counter = 0

    def __repr__(self):
        return f"Rng(master_seed={self.master_seed}, stream_id={self.stream_id}, counter={self.counter})"

    def split(self, i: int) -> "Rng":
        child = mix64(self.stream_id ^ mix64((int(i) + SPLIT_SALT) & MASK64))
        return Rng(self.master_seed, child)

    def words(self, size: int) -> np.ndarray:
        """Next ``size`` words as a uint64 array."""
        size = int(size)
        if size < 0:
            raise ValueError("size must be non-negative")
        k = np.arange(self.counter + 1, self.counter + 1 + size, dtype=np.uint64)
        self.counter += size
        return _mix64_array(np.uint64(self._key) + k * np.uint64(GOLDEN))

    def integers(self, high: int, size) -> np.ndarray:
        """Uniform integers in ``[0, high)``, int64, any shape."""
        if high < 1:
            raise ValueError("high must be >= 1")
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape)) if shape else 1
        out = self.words(count) % np.uint64(high)
        return out.astype(np.int64).reshape(shape)

    def below(self, high: int) -> int:
        return int(self.integers(high, 1)[0])

    def random(self, size) -> np.ndarray:
        """Uniform floats in ``[0, 1)`` with 53-bit resolution."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape)) if shape else 1
        w = self.words(count) >> np.uint64(11)
        return (w.astype(np.float64) * 2.0**-53).reshape(shape)

    def bernoulli(self, p: float) -> bool:
        return bool(self.random(1)[0] < p)
