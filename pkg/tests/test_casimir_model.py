"""Tests for the formal 6x6 Casimir matrix over push-down words.

The model only knows the six slot eigenvalues and which slot pairs are
connected by one- or two-level pushes, so every expected polynomial here
can be read off from small products done by hand.  The frozen blocks for
the three- to five-fold compositions were computed once with this module
and cross-checked by multiplying the shifted matrices manually.
"""

from fractions import Fraction

import pytest

from grassops import casimir_model as cm
from grassops.errors import UsageError


def one(word):
    return {tuple(word): Fraction(1)}


class TestPolyHelpers:
    def test_const_zero_is_empty(self):
        assert cm.poly_const(0) == {}
        assert cm.poly_zero() == {}

    def test_add_cancels_to_nothing(self):
        p = {("N1",): Fraction(2)}
        q = {("N1",): Fraction(-2), (): Fraction(1)}
        assert cm.poly_add(p, q) == {(): Fraction(1)}

    def test_mul_concatenates_words(self):
        p = cm.poly_add(one(["N1"]), cm.poly_const(3))
        q = one(["N2"])
        assert cm.poly_mul(p, q) == {
            ("N1", "N2"): Fraction(1),
            ("N2",): Fraction(3),
        }

    def test_format(self):
        assert cm.format_poly({}) == "0"
        assert cm.format_poly({(): Fraction(-4)}) == "-4"
        mixed = {(): Fraction(1), ("N2",): Fraction(-16), ("N1", "N1"): Fraction(1)}
        assert cm.format_poly(mixed) == "1 + -16*N2 + 1*N1*N1"


class TestMatrixStructure:
    def test_series_eigenvalues(self):
        model = cm.FormalCasimir.for_series(3, 2)
        assert [model.eigenvalues[p] for p in cm.POSITIONS] == [0, 0, 4, -4, 0, 0]

    def test_eigenvalues_do_not_depend_on_the_instance(self):
        small = cm.FormalCasimir.for_series(2, 2)
        large = cm.FormalCasimir.for_series(5, 4)
        assert small.eigenvalues == large.eigenvalues

    def test_missing_eigenvalue_rejected(self):
        partial = {p: Fraction(0) for p in ("0", "1", "2a", "3", "4")}
        with pytest.raises(UsageError):
            cm.FormalCasimir(partial)

    def test_entries(self):
        model = cm.FormalCasimir.for_series(3, 2)
        assert model.entry("2a", "2a") == {(): Fraction(4)}
        assert model.entry("0", "0") == {}
        for to, frm in cm._ONE_STEP:
            assert model.entry(to, frm) == one(["N1"])
        for to, frm in cm._TWO_STEP:
            assert model.entry(to, frm) == one(["N2"])
        # nothing pushes upward
        assert model.entry("0", "4") == {}
        assert model.entry("1", "3") == {}

    def test_unknown_block_rejected(self):
        model = cm.FormalCasimir.for_series(3, 2)
        product = model.compose([0])
        with pytest.raises(UsageError):
            cm.block(product, "5", "0")


class TestCompositions:
    @pytest.fixture()
    def model(self):
        return cm.FormalCasimir.for_series(3, 2)

    def test_empty_composition_rejected(self, model):
        with pytest.raises(UsageError):
            model.compose([])

    def test_single_shift_kills_its_own_eigenslot(self, model):
        assert cm.block(model.compose([4]), "2a", "2a") == {}
        assert cm.block(model.compose([-4]), "2b", "2b") == {}
        shifted = model.compose([0])
        for pos in ("0", "1", "3", "4"):
            assert cm.block(shifted, pos, pos) == {}
        assert cm.block(shifted, "2a", "2a") == {(): Fraction(4)}

    def test_three_fold_bottom_corner(self, model):
        product = model.compose([0, 4, -4])
        assert cm.block(product, "3", "1") == {("N2",): Fraction(-16)}
        assert cm.block(product, "4", "0") == {
            ("N1", "N1", "N2"): Fraction(2),
            ("N1", "N2", "N1"): Fraction(1),
            ("N2", "N1", "N1"): Fraction(2),
        }

    def test_four_fold_leaves_only_the_long_word(self, model):
        product = model.compose([0, 0, 4, -4])
        assert cm.block(product, "4", "0") == {("N1",) * 4: Fraction(2)}
        assert cm.block(product, "3", "1") == {}

    def test_five_fold_kills_everything_but_one_block(self, model):
        product = model.compose([0, 0, 0, 4, -4])
        nonzero = {key for key, poly in product.items() if poly}
        assert nonzero == {("4", "0")}
        corner = cm.block(product, "4", "0")
        assert corner == {("N1", "N2", "N1"): Fraction(-16)}
        # the corner factors through the three-fold (3, 1) block: push one
        # level, apply that block, push one more level
        middle = cm.block(model.compose([0, 4, -4]), "3", "1")
        chained = cm.poly_mul(one(["N1"]), cm.poly_mul(middle, one(["N1"])))
        assert corner == chained
