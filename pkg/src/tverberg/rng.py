"""Deterministic 64-bit PRNG used by every randomized routine.

The generator is SplitMix64 ("splitmix64/v1"): a counter advanced by the
64-bit golden ratio, finalized with two xor-multiply mixes.  It is
platform-independent integer arithmetic, so identical seeds reproduce
identical streams everywhere.  Child streams (retries, per-cell bench
seeds) are derived with :func:`derive_seed`, never by reusing the parent
stream position.
"""

from __future__ import annotations

from fractions import Fraction

RNG_NAME = "splitmix64/v1"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_STREAM = 0xD1B54A32D192ED03


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, stream: int) -> int:
    """Derive an independent child seed (stream 0, 1, 2, ... for retries)."""
    return _mix((seed & _MASK) ^ ((stream + 1) * _STREAM & _MASK))


class SplitMix64:
    """Seeded stream of 64-bit words with a few convenience draws."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def unit_fraction(self) -> Fraction:
        """Exact rational uniform in [0, 1) with 53 random bits."""
        return Fraction(self.next_u64() >> 11, 1 << 53)

    def unit_float(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), order randomized."""
        if k > n:
            raise ValueError("sample larger than population")
        idx = list(range(n))
        self.shuffle(idx)
        return idx[:k]
