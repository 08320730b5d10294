"""Deterministic random numbers for demo parameters and verification runs.

The generator is Knuth's MMIX 64-bit linear congruential generator,

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

with doubles drawn from the top 53 bits of each state, uniform on [0, 1).
The constants and the row-major fill order of :meth:`Lcg.matrix` are part
of the command-line interface contract: a given seed produces the same
demo projections and verification instances on every platform.
"""

from __future__ import annotations

import numpy as np

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    """Seeded MMIX linear congruential generator."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & _MASK
        return self.state

    def next_float(self) -> float:
        """Uniform double on [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_float()

    def randint(self, low: int, high: int) -> int:
        """Uniform integer on [low, high] inclusive."""
        if high < low:
            raise ValueError("empty integer range")
        return low + self.next_u64() % (high - low + 1)

    def matrix(self, rows: int, cols: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """Matrix filled row by row with uniform draws on [low, high)."""
        out = np.empty((rows, cols))
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.uniform(low, high)
        return out

    def vector(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return self.matrix(1, n, low, high)[0]

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates shuffle of 0..n-1."""
        perm = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.randint(0, i)
            perm[i], perm[j] = perm[j], perm[i]
        return perm
