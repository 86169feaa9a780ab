"""Weights for the trace-free rank m setting, in epsilon coordinates.

A weight is a point of the trace-zero hyperplane of the rank m weight
space, stored as m rational coordinates summing to zero.  The i-th
fundamental weight (1-based, with the convention that the m-th one is the
zero weight) is::

    fw(i) = e_1 + ... + e_i - (i/m) * (e_1 + ... + e_m)

The pairing is the Euclidean dot product of coordinates, which restricted
to the trace-zero hyperplane is proportional to the form induced by the
trace form; the normalization is fixed by the matrix realization oracle in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError


@dataclass(frozen=True)
class RankData:
    """Structure dimensions: an n-dimensional factor with n >= 2."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise UsageError(f"n must be an integer >= 2, got {self.n}")

    @property
    def m(self) -> int:
        return self.n + 2


@dataclass(frozen=True)
class Weight:
    """A weight in epsilon coordinates, constrained to the trace-zero hyperplane."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if sum(coords) != 0:
            raise ValueError(f"coordinates must sum to zero, got {coords}")

    @property
    def m(self) -> int:
        return len(self.coords)

    def _check_rank(self, other: "Weight") -> None:
        if self.m != other.m:
            raise ValueError(f"rank mismatch: {self.m} vs {other.m}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check_rank(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check_rank(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, scalar) -> "Weight":
        return Weight(tuple(Fraction(scalar) * c for c in self.coords))

    __rmul__ = __mul__

    def __neg__(self) -> "Weight":
        return self * -1


def zero_weight(m: int) -> Weight:
    return Weight((Fraction(0),) * m)


def fundamental_weight(i: int, m: int) -> Weight:
    """The i-th fundamental weight, 1-based; ``i = m`` gives the zero weight."""
    if not 1 <= i <= m:
        raise UsageError(f"fundamental weight index must be in 1..{m}, got {i}")
    if i == m:
        return zero_weight(m)
    shift = Fraction(i, m)
    return Weight(tuple((1 - shift if j < i else -shift) for j in range(m)))


def rho(m: int) -> Weight:
    """Half the sum of positive roots: the sum of all fundamental weights."""
    total = zero_weight(m)
    for i in range(1, m):
        total = total + fundamental_weight(i, m)
    return total


def pairing(a: Weight, b: Weight) -> Fraction:
    """Euclidean pairing of epsilon coordinates."""
    a._check_rank(b)
    return sum((x * y for x, y in zip(a.coords, b.coords)), Fraction(0))


def casimir_eigenvalue(w: Weight) -> Fraction:
    """Eigenvalue <w, w + 2 rho> of the quadratic Casimir.

    For an irreducible module this is evaluated on the minus lowest
    weight (equivalently the highest weight of the dual); the matrix
    realization oracle in the tests checks the normalization.
    """
    return pairing(w, w) + 2 * pairing(w, rho(w.m))


def bundle_minus_lowest_weight(bundle, m: int) -> Weight:
    """Minus the lowest weight of an irreducible constituent bundle.

    ``bundle`` is anything with attributes ``s`` (symmetric power of the
    two dimensional contravariant factor), ``columns`` (column heights of
    the covariant Young shape on the n-dimensional factor) and ``w``
    (density weight).  The three ingredients contribute additively:

    - each symmetric power step adds fw(1) - fw(2),
    - a column of height h adds fw(h + 2) - fw(2),
    - the density adds w * fw(2).
    """
    total = bundle.s * (fundamental_weight(1, m) - fundamental_weight(2, m))
    for h in bundle.columns:
        if h + 2 > m:
            raise UsageError(f"column height {h} exceeds n = {m - 2}")
        total = total + fundamental_weight(h + 2, m) - fundamental_weight(2, m)
    return total + bundle.w * fundamental_weight(2, m)
