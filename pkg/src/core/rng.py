"""
SplitMix64 - The pinned random stream behind every generated instance.

Output word i (0-based) of a stream seeded with s is mix(s + (i + 1) * GAMMA)
modulo 2**64. Bit t of the stream is bit (t mod 64) of word t // 64.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """The SplitMix64 finaliser on a single 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """
    SplitMix64 generator with scalar and vectorised draws.

    Both draw paths advance the same counter, so interleaving them keeps
    the documented word order.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed & MASK64
        self.position = 0  # words consumed so far

    def next_u64(self) -> int:
        self.position += 1
        return mix64(self.seed + self.position * GAMMA)

    def words(self, count: int) -> np.ndarray:
        """Draw `count` consecutive words as a uint64 array."""
        if count <= 0:
            return np.zeros(0, dtype=np.uint64)
        offsets = np.arange(self.position + 1, self.position + count + 1, dtype=np.uint64)
        z = np.uint64(self.seed) + offsets * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        z = z ^ (z >> np.uint64(31))
        self.position += count
        return z

    def bits(self, count: int) -> np.ndarray:
        """Draw `count` stream bits (uint8 0/1), least-significant bit of each word first."""
        words = self.words((count + 63) // 64)
        as_bytes = words.astype("<u8").view(np.uint8)
        return np.unpackbits(as_bytes, bitorder="little")[:count]

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection, without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            w = self.next_u64()
            if w < limit:
                return w % bound


def derive_seed(master_seed: int, *parts: int) -> int:
    """
    Chain SplitMix64 over `parts`: h <- mix64(h xor part + GAMMA), starting from master_seed.

    Used to give every (algorithm, m, trial) cell its own instance seed.
    """
    h = master_seed & MASK64
    for part in parts:
        h = mix64(((h ^ (part & MASK64)) + GAMMA) & MASK64)
    return h


def stable_id(label: str) -> int:
    """A platform-stable 64-bit digest of a label."""
    return int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "little")
