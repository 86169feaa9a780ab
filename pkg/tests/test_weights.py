"""Weight arithmetic pinned against an explicit matrix realization.

The engine computes Casimir eigenvalues from a pairing formula on epsilon
coordinates.  The oracle below takes the other route: it realizes small
irreducible modules as Young-projected subspaces of covariant tensor powers
of R^m, applies the quadratic Casimir element of sl(m) slotwise as honest
matrices (built from the trace-form dual pairs E_ab / E_ba), and reads off
the scalar.  The two routes share no code, so agreement fixes the pairing
normalization.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from grassops import forms, weights, young
from grassops.errors import UsageError


def _parity(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _group_combine(data, group, signed):
    """Average the array over permutations of the listed axes."""
    acc = np.zeros_like(data)
    for perm in itertools.permutations(range(len(group))):
        order = list(range(data.ndim))
        for pos, axis in enumerate(group):
            order[axis] = group[perm[pos]]
        term = np.transpose(data, order)
        acc = acc + (_parity(perm) * term if signed else term)
    return acc * Fraction(1, math.factorial(len(group)))


def _young_project(columns, data):
    """Row-symmetrize then column-alternate, slots numbered column by column."""
    offsets, used = [], 0
    for height in columns:
        offsets.append(used)
        used += height
    assert used == data.ndim
    rows = [[offsets[j] + i for j, h in enumerate(columns) if h > i]
            for i in range(columns[0])]
    cols = [list(range(off, off + h)) for off, h in zip(offsets, columns)]
    for row in rows:
        if len(row) > 1:
            data = _group_combine(data, row, signed=False)
    for col in cols:
        if len(col) > 1:
            data = _group_combine(data, col, signed=True)
    return data


def _dual_slot_action(mat, data, slot):
    """Action of a matrix on one covariant slot: minus the transpose."""
    moved = np.moveaxis(data, slot, 0)
    out = np.tensordot(-mat.T, moved, axes=([1], [0]))
    return np.moveaxis(out, 0, slot)


def _casimir_apply(data, m):
    """Quadratic Casimir of sl(m) on a covariant tensor power.

    Sum of E_ab composed with its trace-form dual E_ba, minus the center
    correction (1/m) * identity-rep squared; the identity acts on degree d
    covariant tensors as -d.
    """
    d = data.ndim
    total = np.zeros_like(data)
    for a in range(m):
        for b in range(m):
            e_ab = np.zeros((m, m), dtype=object)
            e_ab[a, b] = Fraction(1)
            inner = sum(_dual_slot_action(e_ab.T, data, s) for s in range(d))
            total = total + sum(_dual_slot_action(e_ab, inner, s)
                                for s in range(d))
    return total - Fraction(d * d, m) * data


def _matrix_casimir_scalar(columns, m):
    """Scalar of the Casimir on the projected module, from the matrices alone."""
    d = sum(columns)
    scalar = None
    found = 0
    for seed_index in itertools.product(range(m), repeat=d):
        seed = np.zeros((m,) * d, dtype=object)
        seed[seed_index] = Fraction(1)
        v = _young_project(columns, seed)
        if not np.any(v != 0):
            continue
        w = _casimir_apply(v, m)
        ratio = None
        for x, y in zip(v.ravel(), w.ravel()):
            if x != 0:
                ratio = Fraction(y) / Fraction(x)
                break
        assert np.array_equal(w, ratio * v), \
            f"Casimir is not scalar on the {columns} module"
        if scalar is None:
            scalar = ratio
        else:
            assert ratio == scalar
        found += 1
        if found == 2:
            break
    assert scalar is not None
    return scalar


_SMALL_SHAPES = [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]


@pytest.mark.parametrize("m", [4, 5])
@pytest.mark.parametrize("columns", _SMALL_SHAPES)
def test_casimir_eigenvalue_matches_matrix_realization(columns, m):
    mu = weights.zero_weight(m)
    for h in columns:
        mu = mu + weights.fundamental_weight(h, m)
    assert _matrix_casimir_scalar(columns, m) == weights.casimir_eigenvalue(mu)


def test_fundamental_weight_coordinates():
    assert weights.fundamental_weight(2, 4).coords == (
        Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2))
    assert weights.fundamental_weight(1, 4).coords == (
        Fraction(3, 4), Fraction(-1, 4), Fraction(-1, 4), Fraction(-1, 4))
    assert weights.fundamental_weight(4, 4) == weights.zero_weight(4)


def test_fundamental_weight_coordinates_sum_to_zero():
    for m in range(2, 8):
        for i in range(1, m + 1):
            assert sum(weights.fundamental_weight(i, m).coords) == 0


def test_fundamental_weight_index_range():
    with pytest.raises(UsageError):
        weights.fundamental_weight(0, 4)
    with pytest.raises(UsageError):
        weights.fundamental_weight(5, 4)


def test_rho_values():
    assert weights.rho(2).coords == (Fraction(1, 2), Fraction(-1, 2))
    assert weights.rho(3).coords == (1, 0, -1)
    assert weights.rho(4).coords == (
        Fraction(3, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(-3, 2))


def test_rho_is_half_sum_of_positive_roots():
    for m in range(2, 7):
        acc = [Fraction(0)] * m
        for i in range(m):
            for j in range(i + 1, m):
                acc[i] += Fraction(1, 2)
                acc[j] -= Fraction(1, 2)
        assert weights.rho(m).coords == tuple(acc)


def test_weight_validation_and_arithmetic():
    with pytest.raises(ValueError):
        weights.Weight((1, 1))
    a = weights.fundamental_weight(1, 4)
    b = weights.fundamental_weight(1, 5)
    with pytest.raises(ValueError):
        a + b
    assert (2 * a - a) == a
    assert (-a) + a == weights.zero_weight(4)


def test_rank_data_bounds():
    assert weights.RankData(2).m == 4
    with pytest.raises(UsageError):
        weights.RankData(1)


def test_casimir_eigenvalue_of_zero_weight():
    assert weights.casimir_eigenvalue(weights.zero_weight(5)) == 0


def test_middle_slot_eigenvalues_at_smallest_instance():
    """The two middle constituents at m = 4 have eigenvalues 4 and -4."""
    fw = lambda i: weights.fundamental_weight(i, 4)
    upper = 2 * fw(3) - 4 * fw(2) + 2 * fw(1)
    lower = fw(4) + fw(2) - 3 * fw(2)
    assert weights.casimir_eigenvalue(upper) == 4
    assert weights.casimir_eigenvalue(lower) == -4


@pytest.mark.parametrize("k,m", [(2, 4), (3, 5), (4, 6), (3, 6)])
def test_bundle_weight_combinations(k, m):
    fw = lambda i: weights.fundamental_weight(i, m)
    top = forms.IrreducibleBundle(0, (k - 2, k - 2) if k > 2 else (), -k + 2)
    assert weights.bundle_minus_lowest_weight(top, m) == 2 * fw(k) - k * fw(2)
    middle = forms.IrreducibleBundle(2, (k - 1, k - 1), -k + 2)
    assert weights.bundle_minus_lowest_weight(middle, m) == (
        2 * fw(k + 1) - (k + 2) * fw(2) + 2 * fw(1))


def test_trivial_bundle_weight_is_zero():
    trivial = forms.IrreducibleBundle(0, (), 0)
    assert weights.bundle_minus_lowest_weight(trivial, 5) == weights.zero_weight(5)


def test_bundle_weight_rejects_tall_columns():
    bad = forms.IrreducibleBundle(0, (3,), 0)
    with pytest.raises(UsageError):
        weights.bundle_minus_lowest_weight(bad, 4)


def test_series_eigenvalues_across_all_small_instances():
    for n in range(2, 6):
        for k in range(2, n + 1):
            series = forms.two_column_series(k, n)
            values = [
                weights.casimir_eigenvalue(
                    weights.bundle_minus_lowest_weight(b, n + 2))
                for slot in series.slots for b in slot
            ]
            assert values == [0, 0, 4, -4, 0, 0]
