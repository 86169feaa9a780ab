"""Form decompositions, composition series and their bookkeeping laws."""

from fractions import Fraction

import pytest

from grassops import forms, weights, young
from grassops.errors import UsageError


def test_bundle_record_round_trip():
    b = forms.IrreducibleBundle(1, (2, 1), -1)
    record = b.to_record()
    assert record == {"s": 1, "columns": [2, 1], "w": -1}
    assert set(record) == {"s", "columns", "w"}
    assert forms.IrreducibleBundle.from_record(record) == b
    assert b.label() == "(s=1, columns=(2,1), w=-1)"


def test_bundle_validation():
    with pytest.raises(ValueError):
        forms.IrreducibleBundle(-1, (), 0)
    with pytest.raises(ValueError):
        forms.IrreducibleBundle(0, (1, 2), 0)


def test_canonical_wraps_full_height_columns():
    assert forms.canonical(forms.IrreducibleBundle(0, (4,), 0), 3) is None
    wrapped = forms.canonical(forms.IrreducibleBundle(1, (3, 1), 0), 3)
    assert wrapped == forms.IrreducibleBundle(1, (1,), -1)
    both = forms.canonical(forms.IrreducibleBundle(0, (3, 3), 5), 3)
    assert both == forms.IrreducibleBundle(0, (), 3)
    kept = forms.canonical(forms.IrreducibleBundle(0, (2, 1), -2), 3)
    assert kept == forms.IrreducibleBundle(0, (2, 1), -2)


def test_bundle_dimension_counts_primed_factor():
    b = forms.IrreducibleBundle(2, (2, 1), 0)
    assert forms.bundle_dimension(b, 3) == 3 * young.dimension(b.diagram, 3)


def test_two_form_decomposition():
    for n in (2, 3, 5):
        got = forms.decompose_forms(2, n)
        assert got == [
            forms.IrreducibleBundle(0, (1, 1), -1),
            forms.IrreducibleBundle(2, (2,) if n > 2 else (), 0 if n > 2 else -1),
        ]


def test_four_form_decomposition():
    generic = forms.decompose_forms(4, 5)
    assert [(b.s, b.w) for b in generic] == [(0, -2), (2, -1), (4, 0)]
    assert [b.columns for b in generic] == [(2, 2), (3, 1), (4,)]
    # at n = 4 the height-four column is a full top power and wraps
    boundary = forms.decompose_forms(4, 4)
    assert [(b.s, b.columns, b.w) for b in boundary] == [
        (0, (2, 2), -2), (2, (3, 1), -1), (4, (), -1)]


def test_zero_form_is_the_trivial_bundle():
    assert forms.decompose_forms(0, 3) == [forms.IrreducibleBundle(0, (), 0)]


def test_degrees_beyond_top_are_empty():
    assert forms.decompose_forms(7, 3) == []
    assert forms.decompose_forms(6, 3) != []


def test_decompose_forms_argument_errors():
    with pytest.raises(UsageError):
        forms.decompose_forms(-1, 3)
    with pytest.raises(UsageError):
        forms.decompose_forms(2, 1)


def test_component_count_law():
    for n in range(2, 7):
        for k in range(1, 7):
            if 2 * k > 2 * n:
                continue
            expected = k + 1 if 2 * k <= n else n - k + 1
            assert forms.form_component_count(2 * k, n) == expected


def test_dimension_bookkeeping():
    for n in range(2, 5):
        for j in range(0, 9):
            assert forms.total_form_dimension(j, n) == forms.binomial(2 * n, j)


def test_binomial_matches_pascal():
    for n in range(0, 10):
        for k in range(0, n + 1):
            if 0 < k:
                assert forms.binomial(n, k) == (
                    forms.binomial(n - 1, k - 1) + forms.binomial(n - 1, k))
    assert forms.binomial(4, 7) == 0


def test_cotractor_series_shapes():
    records = forms.cotractor_form_series(1, 4).to_records()
    assert records == [[{"s": 1, "columns": [], "w": 1}],
                       [{"s": 0, "columns": [1], "w": 0}]]
    records = forms.cotractor_form_series(2, 4).to_records()
    assert records == [[{"s": 0, "columns": [], "w": 1}],
                       [{"s": 1, "columns": [1], "w": 1}],
                       [{"s": 0, "columns": [2], "w": 0}]]
    for k, n in [(3, 4), (4, 5), (5, 7)]:
        series = forms.cotractor_form_series(k, n)
        heights = [b.columns[0] for slot in series.slots for b in slot]
        assert heights == [k - 2, k - 1, k]


def test_cotractor_series_boundary_wrap():
    records = forms.cotractor_form_series(2, 2).to_records()
    assert records[-1] == [{"s": 0, "columns": [], "w": -1}]


# Casimir eigenvalues of the cotractor series constituents, frozen from the
# engine after the pairing normalization was pinned by the matrix oracle in
# test_weights.  They must stay pairwise distinct: the splitting-operator
# construction composes shifted copies and needs separated spectra.
_COTRACTOR_EIGENVALUES = {
    (2, 4): (Fraction(28, 3), Fraction(22, 3), Fraction(4, 3)),
    (3, 4): (Fraction(21, 2), Fraction(13, 2), Fraction(-3, 2)),
    (4, 4): (Fraction(28, 3), Fraction(10, 3), Fraction(-20, 3)),
    (2, 5): (Fraction(80, 7), Fraction(66, 7), Fraction(24, 7)),
    (3, 5): (Fraction(96, 7), Fraction(68, 7), Fraction(12, 7)),
    (4, 5): (Fraction(96, 7), Fraction(54, 7), Fraction(-16, 7)),
    (5, 5): (Fraction(80, 7), Fraction(24, 7), Fraction(-60, 7)),
}


@pytest.mark.parametrize("k,n", sorted(_COTRACTOR_EIGENVALUES))
def test_cotractor_eigenvalues_recorded_and_distinct(k, n):
    series = forms.cotractor_form_series(k, n)
    values = tuple(
        weights.casimir_eigenvalue(weights.bundle_minus_lowest_weight(b, n + 2))
        for slot in series.slots for b in slot)
    assert values == _COTRACTOR_EIGENVALUES[(k, n)]
    assert len(set(values)) == len(values)


def test_main_series_has_six_constituents_in_five_slots():
    for n, k in [(2, 2), (3, 2), (4, 3), (5, 5)]:
        series = forms.two_column_series(k, n)
        assert len(series.slots) == 5
        assert len(series.flat()) == 6
        assert [len(slot) for slot in series.slots] == [1, 1, 2, 1, 1]


def test_main_series_slot_contents():
    records = forms.two_column_series(3, 4).to_records()
    assert records[2] == [{"s": 2, "columns": [2, 2], "w": -1},
                          {"s": 0, "columns": [3, 1], "w": -2}]
    smallest = forms.two_column_series(2, 2).to_records()
    assert smallest[0] == [{"s": 0, "columns": [], "w": 0}]


def test_main_series_argument_errors():
    with pytest.raises(UsageError):
        forms.two_column_series(1, 3)
    with pytest.raises(UsageError):
        forms.two_column_series(4, 3)


def test_main_series_dimension_sum_matches_hook_content():
    """Constituent dimensions add up to the two-column module over n + 2."""
    for n in range(2, 6):
        for k in range(2, n + 1):
            series = forms.two_column_series(k, n)
            total = sum(forms.bundle_dimension(b, n)
                        for slot in series.slots for b in slot)
            assert total == young.dimension(young.YoungDiagram((k, k)), n + 2)


def test_eigenvalue_table_preserves_slot_structure():
    series = forms.two_column_series(3, 3)
    table = forms.eigenvalue_table(series, 5)
    assert table == ((0,), (0,), (4, -4), (0,), (0,))


def test_eigenvalue_table_of_trivial_series():
    series = forms.CompositionSeries([[forms.IrreducibleBundle(0, (), 0)]])
    assert forms.eigenvalue_table(series, 4) == ((0,),)
