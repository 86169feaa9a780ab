"""Dense rational tensors: construction, contraction and slot symmetry."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grassops.tensor import (
    EPS_DOWN,
    EPS_UP,
    PRIMED_DOWN,
    PRIMED_UP,
    TRACTOR_UP,
    UNPRIMED_DOWN,
    UNPRIMED_UP,
    Tensor,
    iter_basis,
)


def test_constructor_checks_axis_count():
    with pytest.raises(ValueError):
        Tensor((UNPRIMED_DOWN,), np.zeros((2, 2), dtype=object))


def test_constructor_checks_primed_dimension():
    with pytest.raises(ValueError):
        Tensor((PRIMED_UP,), np.zeros(3, dtype=object))


def test_constructor_checks_family_dimensions():
    data = np.zeros((2, 3), dtype=object)
    with pytest.raises(ValueError):
        Tensor((UNPRIMED_DOWN, UNPRIMED_DOWN), data)
    with pytest.raises(ValueError):
        Tensor((UNPRIMED_DOWN, TRACTOR_UP), np.zeros((3, 4), dtype=object))
    Tensor((UNPRIMED_DOWN, TRACTOR_UP), np.zeros((3, 5), dtype=object))


def test_data_is_read_only():
    t = Tensor.zeros((UNPRIMED_DOWN,), 3)
    with pytest.raises(ValueError):
        t.data[0] = 1


def test_unit_and_iter_basis():
    t = Tensor.unit((PRIMED_UP, UNPRIMED_DOWN), 3, (1, 2))
    assert t.data[1, 2] == 1 and np.count_nonzero(t.data) == 1
    basis = list(iter_basis((PRIMED_UP, UNPRIMED_DOWN), 3, weight=-2))
    assert len(basis) == 6
    idx, unit = basis[0]
    assert idx == (0, 0) and unit.weight == -2


def test_scalar_tensor():
    s = Tensor.scalar(Fraction(2, 3), weight=1)
    assert s.rank == 0
    assert s.item() == Fraction(2, 3)


def test_addition_requires_matching_signature():
    a = Tensor.zeros((UNPRIMED_DOWN,), 2)
    b = Tensor.zeros((UNPRIMED_UP,), 2)
    c = Tensor.zeros((UNPRIMED_DOWN,), 2, weight=1)
    with pytest.raises(TypeError):
        a + b
    with pytest.raises(TypeError):
        a + c


def test_scaling_and_negation():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 2, 2, lambda i, j: 2 * i - j)
    assert (Fraction(1, 2) * t) * 2 == t
    assert -(-t) == t
    assert (t - t).is_zero()


def test_outer_concatenates_slots_and_adds_weights():
    a = Tensor.from_function((PRIMED_UP,), 2, lambda i: i + 1, weight=1)
    b = Tensor.from_function((UNPRIMED_DOWN,), 2, lambda i: 10 + i, weight=-2)
    ab = a.outer(b)
    assert ab.kinds == (PRIMED_UP, UNPRIMED_DOWN)
    assert ab.weight == -1
    for i in range(2):
        for j in range(2):
            assert ab.data[i, j] == (i + 1) * (10 + j)


def test_transpose_moves_old_slot_perm_i_to_new_slot_i():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 3, 2,
                             lambda i, j, k: 100 * i + 10 * j + k)
    u = t.transpose([2, 0, 1])
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert u.data[i, j, k] == t.data[j, k, i]
    with pytest.raises(ValueError):
        t.transpose([0, 0, 1])


def test_contract_traces_dual_slots():
    t = Tensor.from_function((UNPRIMED_UP, UNPRIMED_DOWN, UNPRIMED_DOWN), 3,
                             lambda a, b, c: a * 9 + b * 3 + c)
    out = t.contract(0, 1)
    for c in range(3):
        assert out.data[c] == sum(a * 9 + a * 3 + c for a in range(3))
    with pytest.raises(TypeError):
        t.contract(1, 2)


def test_contract_with_orders_remaining_slots():
    a = Tensor.from_function((UNPRIMED_DOWN, UNPRIMED_UP), 2,
                             lambda i, j: i + 2 * j + 1)
    b = Tensor.from_function((UNPRIMED_DOWN, UNPRIMED_DOWN), 2,
                             lambda i, j: 5 * i - j)
    out = a.contract_with(b, [(1, 0)])
    assert out.kinds == (UNPRIMED_DOWN, UNPRIMED_DOWN)
    for i in range(2):
        for j in range(2):
            assert out.data[i, j] == sum(
                (i + 2 * c + 1) * (5 * c - j) for c in range(2))
    with pytest.raises(TypeError):
        a.contract_with(b, [(0, 0)])


def test_full_contraction_yields_scalar_tensor():
    out = EPS_UP.contract_with(EPS_DOWN, [(0, 0), (1, 1)])
    assert out.rank == 0
    assert out.item() == -2
    assert out.weight == 0


def test_symmetrize_and_alternate_are_averages():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 2, 3, lambda i, j: 4 * i + j)
    sym = t.symmetrize([0, 1])
    alt = t.alternate([0, 1])
    assert sym + alt == t
    assert sym == sym.symmetrize([0, 1])
    assert alt == alt.alternate([0, 1])
    assert sym.alternate([0, 1]).is_zero()
    assert alt.data[0, 1] == -alt.data[1, 0]


def test_alternate_signs_on_three_slots():
    t = Tensor.unit((UNPRIMED_DOWN,) * 3, 3, (0, 1, 2))
    alt = t.alternate([0, 1, 2])
    assert alt.data[0, 1, 2] == Fraction(1, 6)
    assert alt.data[1, 0, 2] == Fraction(-1, 6)
    assert alt.data[1, 2, 0] == Fraction(1, 6)
    assert alt.data[0, 0, 2] == 0


def test_perm_combine_rejects_mixed_kinds():
    t = Tensor.zeros((UNPRIMED_DOWN, UNPRIMED_UP), 2)
    with pytest.raises(TypeError):
        t.symmetrize([0, 1])
    with pytest.raises(ValueError):
        t.symmetrize([0, 0])


def test_symmetrize_leaves_other_slots_alone():
    t = Tensor.from_function((UNPRIMED_DOWN,) * 3, 2,
                             lambda i, j, k: 100 * i + 10 * j + k)
    out = t.symmetrize([0, 1])
    for k in range(2):
        assert out.data[0, 1, k] == out.data[1, 0, k]
        assert out.data[0, 0, k] == t.data[0, 0, k]


def test_epsilon_conventions():
    assert EPS_UP.data[0, 1] == 1 and EPS_UP.data[1, 0] == -1
    assert EPS_DOWN.data[0, 1] == -1 and EPS_DOWN.data[1, 0] == 1
    assert EPS_UP.weight == 1 and EPS_DOWN.weight == -1
    # the two matrices are mutually inverse in either order
    assert np.array_equal(EPS_UP.data @ EPS_DOWN.data, np.eye(2, dtype=object))
    assert np.array_equal(EPS_DOWN.data @ EPS_UP.data, np.eye(2, dtype=object))


def test_raise_lower_round_trip():
    v = Tensor.from_function((PRIMED_UP, UNPRIMED_DOWN), 2,
                             lambda i, j: 7 * i - 3 * j + 1)
    lowered = v.lower_primed(0)
    assert lowered.kinds[0] == PRIMED_DOWN
    assert lowered.weight == v.weight - 1
    assert lowered.raise_primed(0) == v
    with pytest.raises(TypeError):
        v.raise_primed(0)


def test_lowering_applies_the_covariant_form_on_the_left_index():
    v = Tensor.from_function((PRIMED_UP,), 2, lambda i: i + 5)
    lowered = v.lower_primed(0)
    for b in range(2):
        assert lowered.data[b] == sum(
            (a + 5) * EPS_DOWN.data[a, b] for a in range(2))


_SMALL = st.integers(-9, 9)


@settings(max_examples=30, deadline=None)
@given(st.lists(_SMALL, min_size=8, max_size=8))
def test_alternation_of_any_symmetrization_vanishes(entries):
    data = np.array(entries, dtype=object).reshape(2, 2, 2)
    t = Tensor((UNPRIMED_DOWN,) * 3, data)
    assert t.symmetrize([0, 2]).alternate([0, 2]).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.lists(_SMALL, min_size=4, max_size=4), st.lists(_SMALL, min_size=4, max_size=4))
def test_contract_with_is_bilinear(xs, ys):
    a = Tensor((PRIMED_UP, PRIMED_DOWN), np.array(xs, dtype=object).reshape(2, 2))
    b = Tensor((PRIMED_UP, PRIMED_DOWN), np.array(ys, dtype=object).reshape(2, 2))
    probe = Tensor.from_function((PRIMED_UP, PRIMED_DOWN), 2, lambda i, j: i - j + 2)
    left = (a + b).contract_with(probe, [(1, 0)])
    assert left == a.contract_with(probe, [(1, 0)]) + b.contract_with(probe, [(1, 0)])
