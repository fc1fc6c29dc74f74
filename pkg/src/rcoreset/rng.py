"""Seed handling.

Every random choice in the package is drawn from a named stream derived
from one 64-bit master seed, so identical seeds reproduce identical
partitions, instances and subsamples.  Per-item streams (e.g. one shard
draw per edge) are counter-based: the value for item ``j`` depends only on
``(master_seed, stream, j)``, never on evaluation order.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = ["RngSeed", "as_seed", "SeedLike"]

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class RngSeed:
    master_seed: int

    def __post_init__(self):
        object.__setattr__(self, "master_seed", int(self.master_seed) & _MASK64)

    def _seed_sequence(self, stream: str, ids: tuple[int, ...]) -> np.random.SeedSequence:
        s = self.master_seed
        words = [s & 0xFFFFFFFF, s >> 32, zlib.crc32(stream.encode())]
        words.extend(int(i) & 0xFFFFFFFF for i in ids)
        return np.random.SeedSequence(words)

    def generator(self, stream: str, *ids: int) -> np.random.Generator:
        """Independent sequential generator for ``(stream, *ids)``."""
        return np.random.Generator(np.random.PCG64(self._seed_sequence(stream, ids)))

    def counter_u64(self, stream: str, start: int, count: int, *ids: int) -> np.ndarray:
        """Raw 64-bit words for items ``start .. start+count-1`` of a counter stream."""
        key = self._seed_sequence(stream, ids).generate_state(1, np.uint64)[0]
        j = np.arange(start, start + count, dtype=np.uint64) + np.uint64(1)
        z = key + j * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def counter_uniform(self, stream: str, start: int, count: int, *ids: int) -> np.ndarray:
        """Uniform floats in [0, 1) with 53 random bits, counter-based."""
        words = self.counter_u64(stream, start, count, *ids)
        return (words >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


SeedLike = Union[int, RngSeed]


def as_seed(seed: SeedLike) -> RngSeed:
    if isinstance(seed, RngSeed):
        return seed
    if isinstance(seed, (bool, float)) or seed is None:
        raise TypeError(f"seed must be an int or RngSeed, got {seed!r}")
    return RngSeed(int(seed))
