"""Deterministic 64-bit random number generation.

Graph sampling must reproduce bit-identically across platforms and Python
versions, so this module implements a splitmix-style generator with pure
integer arithmetic instead of relying on ``random`` or NumPy bit generators.
"""
from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """Finalizing avalanche mixer, bijective on 64-bit integers."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, k: int) -> int:
    """Child seed for the k-th derived stream of a master seed.

    Distinct (seed, k) pairs map to distinct child seeds, so independent
    experiment repetitions never share a stream.
    """
    if k < 0:
        raise ValueError("stream index must be nonnegative")
    return mix64((seed & _MASK) ^ mix64((k + 1) & _MASK))


class SplitMix64:
    """Counter-based generator: state advances by a fixed odd gamma."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return mix64(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # largest multiple of bound that fits in 64 bits
        limit = ((1 << 64) // bound) * bound
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound
