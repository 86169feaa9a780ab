"""Exact linear algebra over the rationals.

Small helper routines on dense matrices stored as numpy object arrays of
ints and Fractions.  Everything uses fraction-free-ish Gaussian elimination
with exact pivots, so results are never approximate.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _echelon(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = np.array(mat, dtype=object)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i, c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        inv = Fraction(1, 1) / Fraction(m[r, c])
        m[r, :] = m[r, :] * inv
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i, :] = m[i, :] - m[i, c] * m[r, :]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat) -> int:
    """Rank of a rational matrix."""
    m = np.asarray(mat, dtype=object)
    if m.size == 0:
        return 0
    _, pivots = _echelon(m)
    return len(pivots)


def nullspace(mat) -> list[np.ndarray]:
    """Basis of the right kernel, in deterministic order.

    The basis vectors correspond to the free columns of the reduced row
    echelon form, taken left to right, each with a 1 in its free position.
    """
    m = np.asarray(mat, dtype=object)
    rows, cols = m.shape
    if m.size == 0:
        basis = []
        for f in range(cols):
            v = np.zeros(cols, dtype=object)
            v[f] = Fraction(1)
            basis.append(v)
        return basis
    red, pivots = _echelon(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=object)
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -Fraction(red[r, f])
        basis.append(v)
    return basis


def solve(mat, rhs) -> np.ndarray:
    """Solve ``mat @ x = rhs`` for square invertible ``mat``."""
    m = np.asarray(mat, dtype=object)
    b = np.asarray(rhs, dtype=object)
    rows, cols = m.shape
    if rows != cols:
        raise ValueError("solve requires a square matrix")
    aug = np.concatenate([m, b.reshape(rows, -1)], axis=1)
    red, pivots = _echelon(aug)
    if pivots[:rows] != list(range(rows)):
        raise ValueError("matrix is singular")
    x = red[:, cols:]
    return x.reshape(b.shape)


def inverse(mat) -> np.ndarray:
    """Exact inverse of a square rational matrix."""
    m = np.asarray(mat, dtype=object)
    rows = m.shape[0]
    eye = np.zeros((rows, rows), dtype=object)
    for i in range(rows):
        eye[i, i] = Fraction(1)
    return solve(m, eye)
