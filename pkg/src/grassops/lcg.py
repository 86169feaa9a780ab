"""Deterministic pseudo-random numbers for reproducible checks.

Randomized verification commands must produce byte-identical reports for
identical configuration, so we avoid :mod:`random` (whose algorithm is an
implementation detail of the interpreter) and pin a 64-bit linear
congruential generator with Knuth's MMIX multiplier::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

Draws use the top 32 bits of the state.  The same seed therefore yields the
same sample sequence on every platform and Python version.
"""

from __future__ import annotations

_MULTIPLIER = 6364136223846793005
_INCREMENT = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    """Seeded 64-bit linear congruential generator.

    Parameters
    ----------
    seed : int
        Initial state.  Any integer is accepted; it is reduced mod 2**64.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u32(self) -> int:
        """Advance the state and return the top 32 bits."""
        self.state = (_MULTIPLIER * self.state + _INCREMENT) & _MASK
        return self.state >> 32

    def integer(self, lo: int, hi: int) -> int:
        """Return an integer in the inclusive range [lo, hi].

        The range must be much smaller than 2**32; draws use a single
        32-bit word reduced by modulus, which is amply uniform for the
        small coefficient ranges used in the verification suites.
        """
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        return lo + self.next_u32() % span

    def choice(self, items):
        """Return one element of a non-empty sequence."""
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[self.integer(0, len(items) - 1)]
