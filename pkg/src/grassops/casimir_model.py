"""Formal composition bookkeeping for Casimir polynomials on the filtration.

On the six slot composition series the Casimir operator acts as a constant
(the slot eigenvalue) plus nilpotent parts that push a section one or two
filtration levels down.  Which compositions of eigenvalue-shifted Casimirs
survive between two given slots is a purely formal computation: it only
uses the eigenvalues and the level structure, not the actual differential
operators.  This module carries that computation exactly.

Matrix entries are noncommutative polynomials in two letters, ``N1`` for a
one level push and ``N2`` for a two level push, with rational coefficients;
a polynomial is stored as a dict from letter tuples to :class:`Fraction`.
The slot order is ("0", "1", "2a", "2b", "3", "4"), matching the component
names of :class:`grassops.tractor.TwoColumnSection`.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UsageError
from .forms import two_column_series
from .weights import bundle_minus_lowest_weight, casimir_eigenvalue

POSITIONS = ("0", "1", "2a", "2b", "3", "4")

_ONE_STEP = (
    ("1", "0"),
    ("2a", "1"),
    ("2b", "1"),
    ("3", "2a"),
    ("3", "2b"),
    ("4", "3"),
)

_TWO_STEP = (
    ("2a", "0"),
    ("2b", "0"),
    ("3", "1"),
    ("4", "2a"),
    ("4", "2b"),
)

Word = tuple[str, ...]
Poly = dict[Word, Fraction]


def poly_zero() -> Poly:
    return {}


def poly_const(c) -> Poly:
    c = Fraction(c)
    return {(): c} if c else {}


def poly_letter(letter: str) -> Poly:
    return {(letter,): Fraction(1)}


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for word, coeff in b.items():
        total = out.get(word, Fraction(0)) + coeff
        if total:
            out[word] = total
        else:
            out.pop(word, None)
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            word = wa + wb
            total = out.get(word, Fraction(0)) + ca * cb
            if total:
                out[word] = total
            else:
                out.pop(word, None)
    return out


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for word in sorted(p, key=lambda w: (len(w), w)):
        coeff = p[word]
        name = "*".join(word) if word else "1"
        parts.append(f"{coeff}*{name}" if word else f"{coeff}")
    return " + ".join(parts)


class FormalCasimir:
    """The Casimir operator as a formal 6x6 matrix over push-down words."""

    def __init__(self, eigenvalues: dict[str, Fraction]):
        missing = [p for p in POSITIONS if p not in eigenvalues]
        if missing:
            raise UsageError(f"missing eigenvalues for slots {missing}")
        self.eigenvalues = {p: Fraction(eigenvalues[p]) for p in POSITIONS}
        self._matrix: dict[tuple[str, str], Poly] = {}
        for pos in POSITIONS:
            self._matrix[(pos, pos)] = poly_const(self.eigenvalues[pos])
        for to, frm in _ONE_STEP:
            self._matrix[(to, frm)] = poly_letter("N1")
        for to, frm in _TWO_STEP:
            self._matrix[(to, frm)] = poly_letter("N2")

    @classmethod
    def for_series(cls, n: int, k: int) -> "FormalCasimir":
        """Eigenvalues computed from the weights of the two column series."""
        series = two_column_series(k, n)
        flat = [bundle for slot in series.slots for bundle in slot]
        if len(flat) != len(POSITIONS):
            raise UsageError("series does not have six constituents")
        m = n + 2
        eigen = {
            pos: casimir_eigenvalue(bundle_minus_lowest_weight(bundle, m))
            for pos, bundle in zip(POSITIONS, flat)
        }
        return cls(eigen)

    def entry(self, to: str, frm: str) -> Poly:
        return dict(self._matrix.get((to, frm), poly_zero()))

    def shifted(self, c) -> dict[tuple[str, str], Poly]:
        """Matrix of the operator minus a constant."""
        out = {key: dict(p) for key, p in self._matrix.items()}
        for pos in POSITIONS:
            out[(pos, pos)] = poly_add(out[(pos, pos)], poly_const(-Fraction(c)))
        return out

    def compose(self, roots) -> dict[tuple[str, str], Poly]:
        """Product of eigenvalue-shifted copies, leftmost factor outermost.

        ``compose([c1, c2, c3])`` is the matrix of (C - c1)(C - c2)(C - c3),
        so the rightmost root acts first.
        """
        roots = list(roots)
        if not roots:
            raise UsageError("need at least one factor")
        product = self.shifted(roots[0])
        for c in roots[1:]:
            product = _mat_mul(product, self.shifted(c))
        return product


def _mat_mul(a: dict, b: dict) -> dict:
    out: dict[tuple[str, str], Poly] = {}
    for to in POSITIONS:
        for frm in POSITIONS:
            acc = poly_zero()
            for mid in POSITIONS:
                pa = a.get((to, mid))
                pb = b.get((mid, frm))
                if pa and pb:
                    acc = poly_add(acc, poly_mul(pa, pb))
            if acc:
                out[(to, frm)] = acc
    return out


def block(product: dict, to: str, frm: str) -> Poly:
    """One block of a composed matrix, empty dict when it vanished."""
    if to not in POSITIONS or frm not in POSITIONS:
        raise UsageError(f"unknown slots ({to}, {frm})")
    return dict(product.get((to, frm), poly_zero()))
