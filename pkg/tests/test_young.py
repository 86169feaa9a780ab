"""Diagram bookkeeping and the row-then-column projector convention.

Two independent oracles anchor this file: the four-slot worked projection is
recomputed as a bare sequence of axis swaps on the raw array, and the rank
of the two-column projector is read off an explicit matrix.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grassops import linalg, young
from grassops.tensor import Tensor, UNPRIMED_DOWN, UNPRIMED_UP


def _swap_axes(arr, a, b):
    order = list(range(arr.ndim))
    order[a], order[b] = order[b], order[a]
    return np.transpose(arr, order)


def test_diagram_validation():
    with pytest.raises(ValueError):
        young.YoungDiagram((1, 2))
    with pytest.raises(ValueError):
        young.YoungDiagram((2, 0))
    assert young.YoungDiagram(()).boxes == 0


def test_rows_are_the_conjugate_partition():
    assert young.YoungDiagram((3, 1)).rows == (2, 1, 1)
    assert young.YoungDiagram((2, 2, 1)).rows == (3, 2)
    assert young.YoungDiagram((1, 1, 1)).rows == (3,)


def test_slot_numbering_is_column_major():
    d = young.YoungDiagram((2, 2))
    assert d.column_slots() == [[0, 1], [2, 3]]
    assert d.row_slots() == [[0, 2], [1, 3]]


def test_single_column_kills_symmetric_tensor():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 2, 3, lambda i, j: i + j)
    out = young.apply_projector(young.YoungDiagram((2,)), t)
    assert out.is_zero()


def test_single_row_is_plain_symmetrization():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 2, 3, lambda i, j: 3 * i + 7 * j)
    out = young.apply_projector(young.YoungDiagram((1, 1)), t)
    expected = (t.data + t.data.T) * Fraction(1, 2)
    assert np.array_equal(out.data, expected)


def test_two_column_projector_matches_stepwise_recipe():
    """The worked four-slot projection, written out swap by swap.

    Starting from the unit tensor e1 x e2 x e1 x e2 over R^3, symmetrize
    slots 0 and 2, then slots 1 and 3, then alternate the first and the
    second slot pair.  The projector applied to the same tensor must agree
    entry by entry.
    """
    start = Tensor.unit((UNPRIMED_DOWN,) * 4, 3, (0, 1, 0, 1))
    data = start.data
    data = (data + _swap_axes(data, 0, 2)) * Fraction(1, 2)
    data = (data + _swap_axes(data, 1, 3)) * Fraction(1, 2)
    data = (data - _swap_axes(data, 0, 1)) * Fraction(1, 2)
    data = (data - _swap_axes(data, 2, 3)) * Fraction(1, 2)

    out = young.apply_projector(young.YoungDiagram((2, 2)), start)
    assert not out.is_zero()
    assert np.array_equal(out.data, data)


def test_two_column_projector_rank_is_six():
    """Rank of the (2,2) projector on the fourth tensor power of R^3.

    The matrix is assembled column by column from unit tensors; its exact
    rank comes from rational elimination and is double-checked in floating
    point, then compared with the hook-content count.
    """
    diagram = young.YoungDiagram((2, 2))
    kinds = (UNPRIMED_UP,) * 4
    images = []
    for idx in np.ndindex(*(3,) * 4):
        out = young.apply_projector(diagram, Tensor.unit(kinds, 3, idx))
        images.append(out.data.reshape(-1))
    mat = np.array(images, dtype=object)
    assert linalg.rank(mat) == 6
    floats = np.array([[float(x) for x in row] for row in images])
    assert np.linalg.matrix_rank(floats) == 6
    assert young.dimension(diagram, 3) == 6


# Double-application constants, solved once per shape and checked below
# against an actual double application.
_NORMALIZATION = {
    (1,): Fraction(1),
    (2,): Fraction(1),
    (1, 1): Fraction(1),
    (3,): Fraction(1),
    (2, 1): Fraction(3, 4),
    (1, 1, 1): Fraction(1),
    (4,): Fraction(1),
    (3, 1): Fraction(2, 3),
    (2, 2): Fraction(3, 4),
    (2, 1, 1): Fraction(2, 3),
    (1, 1, 1, 1): Fraction(1),
}


def test_projector_is_quasi_idempotent():
    for boxes in range(1, 5):
        for diagram in young.all_diagrams(boxes):
            c = young.projector_normalization(diagram)
            assert c == _NORMALIZATION[diagram.columns]
            t = Tensor.from_function(
                (UNPRIMED_DOWN,) * boxes, 3,
                lambda *idx: 1 + sum(v * 3 ** p for p, v in enumerate(idx)))
            once = young.apply_projector(diagram, t)
            assert young.apply_projector(diagram, once) == c * once


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projector_rank_matches_dimension(n):
    """Rank equals the hook-content dimension for every shape with <= 4 boxes.

    The projector divided by its double-application constant is idempotent,
    so its rank equals its trace divided by that constant; the trace is
    accumulated from the diagonal of the full matrix.
    """
    for boxes in range(1, 5):
        for diagram in young.all_diagrams(boxes):
            c = young.projector_normalization(diagram)
            kinds = (UNPRIMED_UP,) * boxes
            trace = Fraction(0)
            for idx in np.ndindex(*(n,) * boxes):
                out = young.apply_projector(diagram, Tensor.unit(kinds, n, idx))
                trace += Fraction(out.data[idx])
            assert trace / c == young.dimension(diagram, n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tensor_power_decomposition_counts(n):
    for boxes in range(1, 5):
        total = sum(
            young.dimension(d, n) * young.num_standard_tableaux(d)
            for d in young.all_diagrams(boxes))
        assert total == n ** boxes


def test_dimension_special_cases():
    assert young.dimension(young.YoungDiagram((1,)), 5) == 5
    for n in range(2, 6):
        assert young.dimension(young.YoungDiagram((n,)), n) == 1
    assert young.dimension(young.YoungDiagram((4,)), 3) == 0


def test_standard_tableau_counts():
    assert young.num_standard_tableaux(young.YoungDiagram((2, 2))) == 2
    assert young.num_standard_tableaux(young.YoungDiagram((2, 1))) == 2
    assert young.num_standard_tableaux(young.YoungDiagram((4,))) == 1
    assert young.num_standard_tableaux(young.YoungDiagram(())) == 1


def test_all_diagrams_counts():
    assert [len(young.all_diagrams(b)) for b in range(1, 5)] == [1, 2, 3, 5]
    for b in range(1, 5):
        for d in young.all_diagrams(b):
            assert d.boxes == b


def test_apply_projector_arity_check():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 3, 2, lambda *i: sum(i))
    with pytest.raises(ValueError):
        young.apply_projector(young.YoungDiagram((2, 2)), t)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=8, max_size=8))
def test_hook_shape_projector_quasi_idempotent_on_arbitrary_input(entries):
    d = young.YoungDiagram((2, 1))
    t = Tensor((UNPRIMED_DOWN,) * 3, np.array(entries, dtype=object).reshape(2, 2, 2))
    once = young.apply_projector(d, t)
    twice = young.apply_projector(d, once)
    assert twice == young.projector_normalization(d) * once
