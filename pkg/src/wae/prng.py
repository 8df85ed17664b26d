"""Portable deterministic random source (splitmix64).

All randomized behaviour in this package (corpus generation, removal
treatments, weight init) goes through this generator so that a given seed
produces identical output on every platform and interpreter. The update is
the splitmix64 step:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

with all arithmetic modulo 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_u64_array(self, n: int):
        """n outputs at once; identical stream to n next_u64() calls.

        The update is counter-based (state_i = state + i*golden), so the
        whole batch vectorizes; the scalar state advances past it.
        """
        import numpy as np

        idx = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + idx * np.uint64(0x9E3779B97F4A7C15)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + n * 0x9E3779B97F4A7C15) & MASK64
        return z

    def random_array(self, n: int):
        """n uniform floats in [0, 1); same stream as n random() calls."""
        return (self.next_u64_array(n) >> 11) * (1.0 / (1 << 53))

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive (modulo-debiased)."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        # rejection sampling to avoid modulo bias
        limit = (MASK64 + 1) - ((MASK64 + 1) % span)
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + (v % span)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def fork(self) -> "SplitMix64":
        """Independent child stream (seeded from this stream's output)."""
        return SplitMix64(self.next_u64())
