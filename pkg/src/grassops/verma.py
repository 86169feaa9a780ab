"""Candidate lifts of the quartic symbol and the obstruction to equivariance.

The uniqueness argument for the fourth order operator leaves one algebraic
question open: whether the symbol-level projection extends to a map that
commutes with the raising part of the graded algebra on four-argument jet
layers.  This module mechanizes that computation.

A degree-three layer is a tensor in three copies of the dual of the
lowering part (each copy one primed-up and one unprimed-down slot) times a
value factor, a two column module twisted by a density.  Vertical
endomorphisms act on such layers by a boundary formula with two groups of
terms: Leibniz terms, where the bracket with one removed argument acts on
the value factor, and insertion terms, where the iterated bracket of two
arguments is fed back into a remaining slot (:func:`g1_action`).

On degree-four layers there are three complete contractions on the primed
slots (:func:`contraction_c`) and three pairings of the unprimed slots into
the two column shape with two boxes per column (:func:`projection_p`).
Suitably normalized composites of one contraction and one pairing all agree
on totally symmetric layers, so a four-parameter affine family of maps
(:func:`phi_map`, :class:`LiftCoefficients`) restricts to the same
symmetric projection.  Applied after the action of a vertical endomorphism
on a deterministically chosen witness layer, every member of the family
produces the same nonzero value (:func:`obstruction_witness`), which is the
obstruction: no member commutes with the action.

Two column modules are realized concretely as images of the projector that
alternates each column and then symmetrizes each row.  That stage order is
forced: with the opposite order the four composites fail to agree on
symmetric layers.  Projections are evaluated by pairing against transported
dual tensors and solving a small Gram system (:class:`TwoColumnRealization`),
which is exact and much cheaper than rerunning permutation sums, and the
straightforward permutation-sum route is kept alongside for cross-checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import young
from .errors import EngineDefectError, UsageError
from .linalg import inverse
from .reports import VerificationReport, report
from .tensor import (
    EPS_DOWN,
    EPS_UP,
    PRIMED_UP,
    UNPRIMED_DOWN,
    Tensor,
    iter_basis,
)
from .tractor import vertical_basis

# The two contraction patterns pair primed slots (lowered slot first in each
# pair); the third is determined by the relation that the three sum to zero.
_CONTRACTION_PAIRS = {
    1: ((0, 1), (2, 3)),
    2: ((0, 3), (1, 2)),
    3: ((0, 2), (3, 1)),
}

# Slot arrangements of the three pairings: each entry lists the two
# permutations whose average (minus the total alternation) is projected to
# the two column shape.  transpose semantics: new slot i is old slot perm[i].
_PAIRING_ARRANGEMENTS = {
    1: ((0, 1, 2, 3), (2, 3, 0, 1)),
    2: ((0, 3, 1, 2), (2, 1, 3, 0)),
    3: ((0, 2, 3, 1), (2, 0, 1, 3)),
}


@dataclass
class JetComponent:
    """One homogeneous layer of the jet module: degree r, tensor value.

    The value has r primed-up slots, then r unprimed-down slots, then the
    unprimed-down slots of the two column value factor (2(k-2) of them,
    column by column).
    """

    r: int
    value: Tensor

    def __post_init__(self):
        if self.r not in (3, 4):
            raise UsageError(f"layer degree must be 3 or 4, got {self.r}")

    def value_slot_count(self) -> int:
        """Number of trailing value-factor slots."""
        return self.value.rank - 2 * self.r

    def validate(self, n: int, k: int) -> None:
        """Check the slot signature against the stated (n, k)."""
        nv = 2 * (k - 2)
        expected = ((PRIMED_UP,) * self.r
                    + (UNPRIMED_DOWN,) * self.r
                    + (UNPRIMED_DOWN,) * nv)
        if self.value.kinds != expected:
            raise UsageError(
                f"degree {self.r} layer at k={k} needs signature {expected}, "
                f"got {self.value.kinds}"
            )

    def value_factor_is_canonical(self, n: int, k: int) -> bool:
        """Whether the trailing value factor lies in its two column module."""
        if k == 2:
            return True
        self.validate(n, k)
        space = realization((k - 2, k - 2), n)
        start = 2 * self.r
        perm = (tuple(range(start, start + 2 * (k - 2)))
                + tuple(range(start)))
        return space.fixes(self.value.transpose(perm))


@dataclass(frozen=True)
class LiftCoefficients:
    """Affine coordinates (K, L, M, N) of one candidate lift."""

    K: Fraction
    L: Fraction
    M: Fraction
    N: Fraction

    def __post_init__(self):
        for name in ("K", "L", "M", "N"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def total(self) -> Fraction:
        return self.K + self.L + self.M + self.N

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.K, self.L, self.M, self.N)


def density_coefficient(k: int) -> int:
    """Trace coefficient of the bracket action on the value-factor density.

    The value factor of a degree-three layer is twisted by the density line
    of weight 2 - k.  Under the convention that the weight -1 line is the
    top exterior power of the contravariant primed factor, the bracket of a
    vertical endomorphism with a lowering argument multiplies that line by
    minus the weight times the trace pairing, hence k - 2 here.  The sign
    is pinned by the matrix-model oracle in the test suite and is the one
    under which all Leibniz terms die in the final projection.
    """
    if k < 2:
        raise UsageError(f"need k >= 2, got {k}")
    return k - 2


# -- contractions on the primed slots -------------------------------------------


def contraction_c(i: int, omega: Tensor) -> Tensor:
    """Complete contraction of the four primed slots, patterns 1, 2 or 3.

    ``omega`` must have four primed-up slots followed by four unprimed-down
    slots; any further slots ride along.  Each pattern lowers the first slot
    of each of its two pairs and traces.  The three results sum to zero.
    """
    if i not in _CONTRACTION_PAIRS:
        raise UsageError(f"contraction pattern must be 1, 2 or 3, got {i}")
    if (omega.rank < 8
            or omega.kinds[:4] != (PRIMED_UP,) * 4
            or omega.kinds[4:8] != (UNPRIMED_DOWN,) * 4):
        raise TypeError(
            "contraction needs four primed-up slots then four unprimed-down "
            f"slots, got {omega.kinds}"
        )
    (a, b), (c, d) = _CONTRACTION_PAIRS[i]
    out = omega.lower_primed(a).contract(a, b)

    def shifted(pos: int) -> int:
        return pos - sum(1 for x in (a, b) if x < pos)

    return out.lower_primed(shifted(c)).contract(shifted(c), shifted(d))


def _contract_sparse(i: int, items) -> dict:
    """Contraction pattern i on a sparse layer, keys (4 primed, rest).

    Equivalent to :func:`contraction_c` on the dense tensor with the same
    entries; the closed form of the two lower-and-trace steps on a unit is
    a product of two skew-form entries.
    """
    (a, b), (c, d) = _CONTRACTION_PAIRS[i]
    eps = EPS_DOWN.data
    out: dict = {}
    for key, coeff in items:
        s = eps[key[a], key[b]] * eps[key[c], key[d]]
        if s == 0:
            continue
        rest = key[4:]
        total = out.get(rest, 0) + s * coeff
        if total:
            out[rest] = total
        else:
            out.pop(rest, None)
    return out


# -- concrete two column modules -------------------------------------------------


def _column_major_project(t: Tensor, diagram: young.YoungDiagram,
                          positions: list[int]) -> Tensor:
    """Alternate each column, then symmetrize each row (averaged stages)."""
    out = t
    for col in diagram.column_slots():
        if len(col) > 1:
            out = out.alternate([positions[s] for s in col])
    for row in diagram.row_slots():
        if len(row) > 1:
            out = out.symmetrize([positions[s] for s in row])
    return out


class TwoColumnRealization:
    """A two column module realized inside plain covariant tensors.

    The realization is the image of the column-alternate-then-row-symmetrize
    projector, divided by its quasi-idempotence constant so that it fixes
    the image pointwise.  A basis is collected from projected unit tensors.

    Projection of an arbitrary tensor is computed without permutation sums:
    pairing the input against the transported duals (the basis pushed
    through the adjoint projector, which is the same stages in the opposite
    order) gives the coordinates of the projected value against the Gram
    matrix of the basis.  The Gram matrix is invertible because the
    coordinate pairing is positive definite on real tensors.
    """

    def __init__(self, columns: tuple[int, ...], n: int):
        self.diagram = young.YoungDiagram(columns)
        self.n = n
        self.normalization = young.projector_normalization(self.diagram)
        self.dimension = young.dimension(self.diagram, n)
        if self.dimension == 0:
            raise UsageError(f"columns {columns} carry no sections over n={n}")
        b = self.diagram.boxes
        kinds = (UNPRIMED_DOWN,) * b
        scale = 1 / self.normalization
        positions = list(range(b))
        basis: list[Tensor] = []
        rows: list[np.ndarray] = []
        pivots: list[int] = []
        for idx in np.ndindex(*(n,) * b):
            t = _column_major_project(Tensor.unit(kinds, n, idx),
                                      self.diagram, positions) * scale
            if t.is_zero():
                continue
            vec = t.data.reshape(-1).copy()
            for row, piv in zip(rows, pivots):
                if vec[piv] != 0:
                    vec = vec - (Fraction(vec[piv]) / Fraction(row[piv])) * row
            nz = np.flatnonzero(vec != 0)
            if nz.size == 0:
                continue
            rows.append(vec)
            pivots.append(int(nz[0]))
            basis.append(t)
            if len(basis) == self.dimension:
                break
        if len(basis) != self.dimension:
            raise EngineDefectError(
                f"two column realization {columns} over n={n}: found "
                f"{len(basis)} of {self.dimension} basis elements"
            )
        self.basis = basis
        self.duals = [
            young.apply_projector(self.diagram, t) * scale for t in basis
        ]
        gram = np.array(
            [[_pair(a.data, c.data) for c in basis] for a in self.duals],
            dtype=object,
        )
        # gram[i][j] = <dual_i, basis_j> = <basis_i, P basis_j> = <basis_i, basis_j>
        self.gram_inverse = inverse(gram)

    def raw_coordinates(self, t: Tensor, positions=None):
        """Pairings <dual_i, t> over the box slots; riding slots keep shape."""
        b = self.diagram.boxes
        if positions is None:
            positions = list(range(b))
        return [
            np.tensordot(d.data, t.data, axes=(list(range(b)), positions))
            for d in self.duals
        ]

    def coordinates(self, t: Tensor, positions=None) -> list:
        """Coefficients of the projection of ``t`` against the basis."""
        raw = self.raw_coordinates(t, positions)
        return [
            sum(self.gram_inverse[i][j] * raw[j] for j in range(len(raw)))
            for i in range(len(raw))
        ]

    def vanishes(self, t: Tensor, positions=None) -> bool:
        """Whether the projection of ``t`` is zero."""
        return all(not np.any(np.asarray(r, dtype=object) != 0)
                   for r in self.raw_coordinates(t, positions))

    def fixes(self, t: Tensor) -> bool:
        """Whether ``t`` already lies in the realized module (box slots
        leading, anything else riding)."""
        return self.project_leading(t) == t

    def project_leading(self, t: Tensor, positions=None) -> Tensor:
        """Project the box slots, leaving any further slots untouched.

        The box slots must come first (``positions`` other than the leading
        range are only supported when they are exactly 0..boxes-1 shifted to
        the front by the caller).
        """
        b = self.diagram.boxes
        if positions is None:
            positions = list(range(b))
        if list(positions) != list(range(b)):
            raise UsageError("box slots must be the leading slots")
        coefs = self.coordinates(t)
        data = np.zeros(t.shape, dtype=object)
        for c, base in zip(coefs, self.basis):
            data = data + np.multiply.outer(base.data, np.asarray(c, dtype=object))
        return Tensor(t.kinds, data.reshape(t.shape), t.weight)


_REALIZATIONS: dict[tuple[tuple[int, ...], int], TwoColumnRealization] = {}


def realization(columns, n: int) -> TwoColumnRealization:
    """Cached :class:`TwoColumnRealization` for one shape and dimension."""
    key = (tuple(columns), n)
    if key not in _REALIZATIONS:
        _REALIZATIONS[key] = TwoColumnRealization(key[0], n)
    return _REALIZATIONS[key]


def _pair(a: np.ndarray, b: np.ndarray):
    """Coordinate pairing: sum of entrywise products, as a plain scalar."""
    val = np.tensordot(a, b, axes=(list(range(a.ndim)), list(range(b.ndim))))
    return val.item() if isinstance(val, np.ndarray) else val


# -- pairings into the two column shape -------------------------------------------


def _inverse_perm(perm):
    out = [0] * len(perm)
    for i, p in enumerate(perm):
        out[p] = i
    return tuple(out)


def _extend(perm, rank: int):
    return tuple(perm) + tuple(range(len(perm), rank))


def _arrangement_combination(j: int, t: Tensor, adjoint: bool = False) -> Tensor:
    """Half the sum of the two arrangements of pairing j minus the total
    alternation of the four leading slots.  ``adjoint`` uses the inverse
    arrangements, giving the transpose of the map under the coordinate
    pairing (the alternation part is its own transpose)."""
    a, b = _PAIRING_ARRANGEMENTS[j]
    if adjoint:
        a, b = _inverse_perm(a), _inverse_perm(b)
    pa, pb = _extend(a, t.rank), _extend(b, t.rank)
    half = Fraction(1, 2)
    return (t.transpose(pa) + t.transpose(pb)) * half - t.alternate([0, 1, 2, 3])


class _PairingFunctionals:
    """Transported duals evaluating the three pairings in one shot.

    For each pairing j the functional list phi[j][i] satisfies
    ``<basis_i, P(A_j(t))> = <phi[j][i], t>`` where P is the two column
    projection and A_j the arrangement combination, so pairing values and
    zero tests reduce to a handful of tensor dots.
    """

    def __init__(self, n: int):
        self.space = realization((2, 2), n)
        dgm = self.space.diagram
        norm = 1 / self.space.normalization
        self.per_pairing: dict[int, list[Tensor]] = {}
        for j in _PAIRING_ARRANGEMENTS:
            transported = []
            for base in self.space.basis:
                d = young.apply_projector(dgm, base) * norm
                transported.append(_arrangement_combination(j, d, adjoint=True))
            self.per_pairing[j] = transported
        # the explicit-alternation template: its combination is self-adjoint
        self.template = []
        for base in self.space.basis:
            d = young.apply_projector(dgm, base) * norm
            self.template.append(_template_combination(d))


_PAIRING_FUNCTIONALS: dict[int, _PairingFunctionals] = {}


def _pairing_functionals(n: int) -> _PairingFunctionals:
    if n not in _PAIRING_FUNCTIONALS:
        _PAIRING_FUNCTIONALS[n] = _PairingFunctionals(n)
    return _PAIRING_FUNCTIONALS[n]


def _template_combination(t: Tensor) -> Tensor:
    """The symmetric-restriction template: half the sum of the block-kept
    and block-swapped copies, each with both index pairs alternated, minus
    the total alternation.  Self-adjoint under the coordinate pairing."""
    w = t.alternate([0, 1]).alternate([2, 3])
    swap = _extend((2, 3, 0, 1), t.rank)
    half = Fraction(1, 2)
    return (w + w.transpose(swap)) * half - t.alternate([0, 1, 2, 3])


def _reconstruct(space: TwoColumnRealization, coords, t: Tensor) -> Tensor:
    """Assemble sum(coords_i * basis_i) with riding slots shaped like t."""
    data = np.zeros(t.shape, dtype=object)
    for c, base in zip(coords, space.basis):
        data = data + np.multiply.outer(base.data, np.asarray(c, dtype=object))
    return Tensor(t.kinds, data.reshape(t.shape), t.weight)


def projection_p(j: int, t: Tensor) -> Tensor:
    """Pairing j of four unprimed slots into the two column shape.

    Averages the two slot arrangements of the pairing, subtracts the total
    alternation and projects onto the shape with two boxes per column;
    further slots of ``t`` ride along.  The three pairings sum to zero.
    """
    if j not in _PAIRING_ARRANGEMENTS:
        raise UsageError(f"pairing must be 1, 2 or 3, got {j}")
    if t.rank < 4 or t.kinds[:4] != (UNPRIMED_DOWN,) * 4:
        raise TypeError(
            f"pairing needs four leading unprimed-down slots, got {t.kinds}"
        )
    n = t.shape[0]
    funcs = _pairing_functionals(n)
    space = funcs.space
    raw = [
        np.tensordot(f.data, t.data, axes=(list(range(4)), list(range(4))))
        for f in funcs.per_pairing[j]
    ]
    coords = [
        sum(space.gram_inverse[i][r] * raw[r] for r in range(len(raw)))
        for i in range(len(raw))
    ]
    return _reconstruct(space, coords, t)


def _projection_p_direct(j: int, t: Tensor) -> Tensor:
    """Permutation-sum route of :func:`projection_p`, kept for cross-checks."""
    n = t.shape[0]
    combined = _arrangement_combination(j, t)
    space = realization((2, 2), n)
    scale = 1 / space.normalization
    return _column_major_project(combined, space.diagram, [0, 1, 2, 3]) * scale


# -- the four candidate lifts ------------------------------------------------------


def _target_arrangement(k: int, rank: int):
    """Permutation moving (pair slots, value columns) to column-major order:
    first column (slots 0, 1 and the first k-2 value slots), then second."""
    m = k - 2
    perm = [0, 1] + [4 + i for i in range(m)] + [2, 3] + [4 + m + i for i in range(m)]
    return _extend(perm, rank)


def _project_to_target(u: Tensor, n: int, k: int) -> Tensor:
    """Rearrange a (four slots + value factor) tensor column-major and
    project onto the two column shape with k boxes per column."""
    v = u.transpose(_target_arrangement(k, u.rank))
    return realization((k, k), n).project_leading(v)


def phi_map(ij: tuple[int, int], psi: JetComponent, n: int, k: int) -> Tensor:
    """One candidate lift applied to a degree-four layer.

    Applies contraction pattern i to the primed slots and pairing j to the
    unprimed slots (with the factor -2 on the off-diagonal choices), leaves
    the value factor alone, and projects everything onto the two column
    shape with k boxes per column.  The output is a covariant tensor with
    2k slots in column-major order.

    The four maps with i, j in {1, 2} agree on layers symmetric in the four
    argument slots, where they all equal the symmetric restriction
    (:func:`phi_reference`).
    """
    i, j = ij
    if i not in (1, 2) or j not in (1, 2):
        raise UsageError(f"lift index must be in {{1,2}} x {{1,2}}, got {ij}")
    if k < 2:
        raise UsageError(f"need k >= 2, got {k}")
    if psi.r != 4:
        raise UsageError(f"lifts act on degree-four layers, got degree {psi.r}")
    psi.validate(n, k)
    u = projection_p(j, contraction_c(i, psi.value))
    if i != j:
        u = -2 * u
    return _project_to_target(u, n, k)


def phi_reference(psi: JetComponent, n: int, k: int) -> Tensor:
    """The symmetric restriction in its explicit-alternation form.

    Uses contraction pattern 1, the template combination of alternated
    block arrangements, and the same final projection as :func:`phi_map`.
    On layers symmetric in the four argument slots this equals every
    :func:`phi_map` output.
    """
    if psi.r != 4:
        raise UsageError(f"expected a degree-four layer, got degree {psi.r}")
    psi.validate(n, k)
    u = contraction_c(1, psi.value)
    space = realization((2, 2), n)
    combined = _template_combination(u)
    scale = 1 / space.normalization
    projected = _column_major_project(combined, space.diagram, [0, 1, 2, 3]) * scale
    return _project_to_target(projected, n, k)


# -- boundary action of vertical endomorphisms -------------------------------------


def _leibniz_permutations(nv: int, k: int):
    """Slot sources for the Leibniz terms, as (permutation, scale) pairs.

    The product tensor has slots (endomorphism primed, endomorphism
    unprimed, three layer primed, three layer unprimed, nv value slots);
    outputs have four argument pairs then the value slots.  For each removed
    argument i the bracket acts on the value factor: a density term with the
    trace coefficient, and one term per value slot feeding the endomorphism
    through that slot.
    """
    out = []
    dens = density_coefficient(k)
    for i in range(4):
        remaining = [l for l in range(4) if l != i]
        base = [0] * (8 + nv)
        for l in remaining:
            sl = remaining.index(l)
            base[l] = 2 + sl
            base[4 + l] = 5 + sl
        for t in range(nv):
            base[8 + t] = 8 + t
        if dens:
            perm = list(base)
            perm[i] = 0
            perm[4 + i] = 1
            out.append((tuple(perm), Fraction(dens)))
        for t in range(nv):
            perm = list(base)
            perm[i] = 0
            perm[4 + i] = 8 + t
            perm[8 + t] = 1
            out.append((tuple(perm), Fraction(1)))
    return out


def _insertion_permutations(nv: int):
    """Slot sources for the insertion terms, as (permutation, scale) pairs.

    For each ordered pair of argument positions i < j, the removed argument
    i is re-inserted at position j through the iterated bracket, whose two
    summands exchange the roles of the endomorphism contraction; the
    bracket formula's sign cancels against the sign of the action, so both
    summands enter positively.
    """
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            remaining = [l for l in range(4) if l != i]
            s = remaining.index(j)
            for (pi_src, pj_src, ui_src, uj_src) in (
                (0, 2 + s, 5 + s, 1),
                (2 + s, 0, 1, 5 + s),
            ):
                perm = [0] * (8 + nv)
                for l in remaining:
                    sl = remaining.index(l)
                    if l == j:
                        continue
                    perm[l] = 2 + sl
                    perm[4 + l] = 5 + sl
                perm[i] = pi_src
                perm[j] = pj_src
                perm[4 + i] = ui_src
                perm[4 + j] = uj_src
                for t in range(nv):
                    perm[8 + t] = 8 + t
                out.append((tuple(perm), Fraction(1)))
    return out


def _check_action_arguments(Z: Tensor, psi: JetComponent, n: int, k: int) -> None:
    if Z.kinds != (PRIMED_UP, UNPRIMED_DOWN):
        raise UsageError("vertical endomorphism must be primed-up, unprimed-down")
    if psi.r != 3:
        raise UsageError(f"the action raises degree-three layers, got {psi.r}")
    psi.validate(n, k)


def _transposed_sum(full: Tensor, perms) -> Tensor:
    total = None
    for perm, scale in perms:
        term = full.transpose(perm)
        if scale != 1:
            term = term * scale
        total = term if total is None else total + term
    return total


def action_leibniz_terms(Z: Tensor, psi: JetComponent, n: int, k: int) -> JetComponent:
    """The removed-argument half of the action: brackets hit the value factor.

    Every term of this half vanishes under the final two column projection,
    so the obstruction computed downstream comes from the insertion half
    alone; the test suite checks that vanishing on a full basis.
    """
    _check_action_arguments(Z, psi, n, k)
    nv = psi.value_slot_count()
    perms = _leibniz_permutations(nv, k)
    full = Z.outer(psi.value)
    if not perms:
        kinds = (PRIMED_UP,) * 4 + (UNPRIMED_DOWN,) * 4
        return JetComponent(4, Tensor.zeros(kinds, n, full.weight))
    return JetComponent(4, _transposed_sum(full, perms))


def action_insertion_terms(Z: Tensor, psi: JetComponent, n: int, k: int) -> JetComponent:
    """The re-inserted-bracket half of the action on a degree-three layer."""
    _check_action_arguments(Z, psi, n, k)
    nv = psi.value_slot_count()
    full = Z.outer(psi.value)
    return JetComponent(4, _transposed_sum(full, _insertion_permutations(nv)))


def g1_action(Z: Tensor, psi: JetComponent, n: int, k: int) -> JetComponent:
    """Action of a vertical endomorphism raising a degree-three layer.

    The sum of :func:`action_leibniz_terms` and
    :func:`action_insertion_terms`.
    """
    lead = action_leibniz_terms(Z, psi, n, k)
    ins = action_insertion_terms(Z, psi, n, k)
    return JetComponent(4, lead.value + ins.value)


# -- the deterministic witness ------------------------------------------------------


_KERNEL_CACHE: dict[int, list[Tensor]] = {}


def witness_kernel_basis(n: int) -> list[Tensor]:
    """Basis of the witness space: one primed-up slot and three unprimed
    slots, skew in the first two, with vanishing total alternation.

    Built by projecting unit tensors with the difference of the two
    alternations (a projector onto the space) and collecting an echelon
    basis; the dimension must come out as 2(n*C(n,2) - C(n,3)).
    """
    if n in _KERNEL_CACHE:
        return _KERNEL_CACHE[n]
    kinds = (PRIMED_UP,) + (UNPRIMED_DOWN,) * 3
    target = 2 * (math.comb(n, 2) * n - math.comb(n, 3))
    basis: list[Tensor] = []
    rows: list[np.ndarray] = []
    pivots: list[int] = []
    for _, unit in iter_basis(kinds, n, weight=-1):
        cand = unit.alternate([1, 2]) - unit.alternate([1, 2, 3])
        if cand.is_zero():
            continue
        vec = cand.data.reshape(-1).copy()
        for row, piv in zip(rows, pivots):
            if vec[piv] != 0:
                vec = vec - (Fraction(vec[piv]) / Fraction(row[piv])) * row
        nz = np.flatnonzero(vec != 0)
        if nz.size == 0:
            continue
        rows.append(vec)
        pivots.append(int(nz[0]))
        basis.append(cand)
        if len(basis) == target:
            break
    if len(basis) != target:
        raise EngineDefectError(
            f"witness space over n={n}: found {len(basis)} of {target} elements"
        )
    _KERNEL_CACHE[n] = basis
    return basis


def standard_value(n: int, k: int) -> Tensor:
    """Deterministic value-factor element: the first basis tensor of the
    two column module with k-2 boxes per column, twisted to weight 2 - k;
    for k = 2 the unit density of weight zero."""
    if k == 2:
        return Tensor.scalar(1)
    first = realization((k - 2, k - 2), n).basis[0]
    return Tensor(first.kinds, first.data, 2 - k)


def witness_layer(n: int, k: int) -> JetComponent:
    """The degree-three layer driving the obstruction: the contravariant
    skew form times the first witness-space element times, for k > 2, the
    standard value-factor element."""
    psi_value = EPS_UP.outer(witness_kernel_basis(n)[0])
    if k > 2:
        psi_value = psi_value.outer(standard_value(n, k))
    return JetComponent(3, psi_value)


# Exact factor relating every candidate lift of the acted witness to the
# projected compact closing form.  Measured once from the engine and frozen;
# it matches the constant -3 carried by the intermediate contraction forms
# and is independent of n, k and the choice of lift.
CLOSING_FORM_FACTOR = Fraction(-3)


def obstruction_witness(coeffs: LiftCoefficients, Z: Tensor,
                        n: int, k: int) -> Tensor:
    """Value of one candidate lift on the acted witness layer.

    For every coefficient quadruple summing to one the result is the same,
    and it is nonzero for suitable Z, which is the obstruction.  The
    coefficient constraint is enforced.
    """
    if coeffs.total() != 1:
        raise UsageError(
            f"lift coefficients must sum to 1, got {coeffs.as_tuple()}"
        )
    psi = witness_layer(n, k)
    acted = g1_action(Z, psi, n, k)
    weights = {(1, 1): coeffs.K, (1, 2): coeffs.L,
               (2, 1): coeffs.M, (2, 2): coeffs.N}
    total = None
    for ij, c in weights.items():
        if c == 0:
            continue
        term = c * phi_map(ij, acted, n, k)
        total = term if total is None else total + term
    if total is None:
        raise UsageError("at least one coefficient must be nonzero")
    return total


def witness_display_value(Z: Tensor, n: int, k: int,
                          psibar: Tensor | None = None) -> Tensor:
    """Projected compact closing form of the acted witness.

    Half the sum of the two block arrangements of the lowered endomorphism
    contracted through the witness element, pushed through the same final
    projection as the lifts.  Every lift value equals
    ``CLOSING_FORM_FACTOR`` times this tensor.  By default the witness is
    the one ``witness_layer`` wraps; any other product of a witness-space
    element with a value factor may be passed instead.
    """
    if psibar is None:
        psibar = witness_kernel_basis(n)[0]
        if k > 2:
            psibar = psibar.outer(standard_value(n, k))
    zlow = Z.lower_primed(0)
    tmp = zlow.contract_with(psibar, [(0, 0)])
    # tmp slots: endomorphism unprimed, three witness slots, value slots
    first = _extend((1, 2, 3, 0), tmp.rank)
    second = _extend((3, 0, 1, 2), tmp.rank)
    disp = (tmp.transpose(first) + tmp.transpose(second)) * Fraction(1, 2)
    return _project_to_target(disp, n, k)


# -- verification ------------------------------------------------------------------


def _symmetrize_argument_pairs(t: Tensor) -> Tensor:
    """Average over simultaneous permutations of the four (primed, unprimed)
    argument pairs of a degree-four layer tensor."""
    total = None
    count = 0
    for perm in itertools.permutations(range(4)):
        full = tuple(perm) + tuple(4 + p for p in perm) + tuple(range(8, t.rank))
        term = t.transpose(full)
        total = term if total is None else total + term
        count += 1
    return total * Fraction(1, count)


def _symmetric_pair_basis(n: int):
    """Representative symmetric degree-four layers, one per multiset of
    argument values; spans the symmetric subspace."""
    kinds = (PRIMED_UP,) * 4 + (UNPRIMED_DOWN,) * 4
    values = [(p, a) for p in range(2) for a in range(n)]
    for combo in itertools.combinations_with_replacement(values, 4):
        idx = tuple(v[0] for v in combo) + tuple(v[1] for v in combo)
        yield _symmetrize_argument_pairs(Tensor.unit(kinds, n, idx))


def _lift_coordinates(funcs: _PairingFunctionals, contracted: Tensor,
                      j: int, scale: Fraction):
    """Raw pairing coordinates of one lift before the final projection."""
    out = []
    for f in funcs.per_pairing[j]:
        val = np.tensordot(f.data, contracted.data,
                           axes=(list(range(4)), list(range(4))))
        out.append(scale * np.asarray(val, dtype=object))
    return out


def _coords_equal(a, b) -> bool:
    return all(not np.any(np.asarray(x, dtype=object)
                          != np.asarray(y, dtype=object))
               for x, y in zip(a, b))


def verify_obstruction(n: int, k: int) -> list[VerificationReport]:
    """Run the obstruction suite at one (n, k): contraction and pairing sum
    rules, agreement of the four lifts on symmetric layers, the relation
    chain on the acted witness, and the coefficient-independent nonzero
    witness value with its closing-form factor."""
    if not 2 <= k <= n:
        raise UsageError(f"need 2 <= k <= n, got k={k}, n={n}")
    out = []

    # contraction patterns sum to zero on the full coordinate basis
    kinds4 = (PRIMED_UP,) * 4 + (UNPRIMED_DOWN,) * 4
    checked = 0
    ok = True
    for _, unit in iter_basis(kinds4, n):
        total = contraction_c(1, unit) + contraction_c(2, unit) + contraction_c(3, unit)
        checked += 1
        if not total.is_zero():
            ok = False
            break
    out.append(report(f"contraction-sum({n},{k})",
                      "three-contractions-sum-to-zero", ok, n=n, basis=checked))

    # pairings sum to zero on the full coordinate basis
    kindsu = (UNPRIMED_DOWN,) * 4
    checked = 0
    ok = True
    for _, unit in iter_basis(kindsu, n):
        total = projection_p(1, unit) + projection_p(2, unit) + projection_p(3, unit)
        checked += 1
        if not total.is_zero():
            ok = False
            break
    out.append(report(f"pairing-sum({n},{k})",
                      "three-pairings-sum-to-zero", ok, n=n, basis=checked))

    # the four lifts coincide with the symmetric restriction on symmetric
    # layers; the value factor rides through every map, so the check runs
    # on the four argument slots alone, plus full-pipeline spot checks
    funcs = _pairing_functionals(n)
    ok = True
    checked = 0
    for sym in _symmetric_pair_basis(n):
        c1 = contraction_c(1, sym)
        c2 = contraction_c(2, sym)
        reference = [
            np.tensordot(f.data, c1.data, axes=(list(range(4)), list(range(4))))
            for f in funcs.template
        ]
        candidates = [
            _lift_coordinates(funcs, c1, 1, Fraction(1)),
            _lift_coordinates(funcs, c1, 2, Fraction(-2)),
            _lift_coordinates(funcs, c2, 1, Fraction(-2)),
            _lift_coordinates(funcs, c2, 2, Fraction(1)),
        ]
        checked += 1
        if not all(_coords_equal(reference, cand) for cand in candidates):
            ok = False
            break
    spot_ok = True
    spots = 0
    if ok:
        for sym in _symmetric_pair_basis(n):
            layer_value = sym if k == 2 else sym.outer(standard_value(n, k))
            layer = JetComponent(4, layer_value)
            ref = phi_reference(layer, n, k)
            if ref.is_zero():
                continue
            spot_ok = spot_ok and all(
                phi_map(ij, layer, n, k) == ref
                for ij in ((1, 1), (1, 2), (2, 1), (2, 2))
            )
            spots += 1
            if spots == 3 or not spot_ok:
                break
    out.append(report(
        f"lift-coincidence({n},{k})",
        "four-lifts-agree-on-symmetric-layers",
        ok and spot_ok and spots > 0,
        n=n, k=k, symmetric_basis=checked, full_pipeline_spots=spots,
    ))

    # relation chain and frozen contraction forms on the acted witness family
    ok_chain = True
    ok_forms = True
    checked = 0
    space22 = funcs.space
    for obar in witness_kernel_basis(n):
        psi = JetComponent(3, EPS_UP.outer(obar))
        for Z in vertical_basis(n):
            acted = action_insertion_terms(Z, psi, n, 2)
            c1 = contraction_c(1, acted.value)
            c2 = contraction_c(2, acted.value)
            zlow = Z.lower_primed(0)
            tmp = zlow.contract_with(obar, [(0, 0)])
            form1 = -3 * tmp.transpose((1, 2, 3, 0))
            form2 = -3 * tmp.transpose((3, 1, 2, 0))
            if c1 != form1 or c2 != form2:
                ok_forms = False
            q11 = _lift_coordinates(funcs, c1, 1, Fraction(1))
            q21 = _lift_coordinates(funcs, c1, 2, Fraction(-2))
            q12 = _lift_coordinates(funcs, c2, 1, Fraction(-2))
            q22 = _lift_coordinates(funcs, c2, 2, Fraction(1))
            if not (_coords_equal(q11, q21) and _coords_equal(q11, q12)
                    and _coords_equal(q11, q22)):
                ok_chain = False
            checked += 1
        if not (ok_chain and ok_forms):
            break
    out.append(report(
        f"witness-chain({n},{k})",
        "contraction-pairing-chain-on-acted-witness",
        ok_chain and ok_forms,
        n=n, witness_basis=len(witness_kernel_basis(n)),
        instances=checked, frozen_forms=ok_forms,
        gram_dimension=space22.dimension,
    ))

    # coefficient independence and the closing form, swept over the whole
    # witness space, every endomorphism unit and every value-factor element
    quadruples = [
        LiftCoefficients(1, 0, 0, 0),
        LiftCoefficients(0, 1, 0, 0),
        LiftCoefficients(0, 0, 1, 0),
        LiftCoefficients(0, 0, 0, 1),
        LiftCoefficients(Fraction(1, 2), Fraction(1, 2),
                         Fraction(1, 2), Fraction(-1, 2)),
        LiftCoefficients(3, -1, -2, 1),
    ]
    lf = _lift_functionals(n, k)
    nv = 2 * (k - 2)
    ins_perms = _insertion_permutations(nv)
    lei_perms = _leibniz_permutations(nv, k)
    half = Fraction(1, 2)
    disp_perms = [(_extend((1, 2, 3, 0), 4 + nv), half),
                  (_extend((3, 0, 1, 2), 4 + nv), half)]
    values = _value_factor_basis(n, k)
    sparse_values = [_sparse_from_tensor(v) for v in values]
    kernel = witness_kernel_basis(n)
    lifts = ((1, 1), (1, 2), (2, 1), (2, 2))
    ok = True
    first_hits = 0
    members_hit = 0
    first_spot = None
    for m, obar in enumerate(kernel):
        obar_items = _sparse_from_tensor(obar)
        hits = 0
        for zidx, _ in iter_basis((PRIMED_UP, UNPRIMED_DOWN), n):
            zp, zu = zidx
            sign = Fraction(-1) if zp == 0 else Fraction(1)
            for vi, vitems in enumerate(sparse_values):
                psibar = [(okey + vkey, oval * vval)
                          for okey, oval in obar_items
                          for vkey, vval in vitems]
                prod = [(zidx + (0, 1) + key, coeff)
                        for key, coeff in psibar]
                prod += [(zidx + (1, 0) + key, -coeff)
                         for key, coeff in psibar]
                terms = (_apply_perms_sparse(prod, ins_perms)
                         + _apply_perms_sparse(prod, lei_perms))
                c = {i: _contract_sparse(i, terms) for i in (1, 2)}
                w = {ij: lf.lift_coords_sparse(ij, c[ij[0]]) for ij in lifts}
                base = None
                for q in quadruples:
                    combo = [q.K * a + q.L * b + q.M * cm + q.N * d
                             for a, b, cm, d in zip(w[(1, 1)], w[(1, 2)],
                                                    w[(2, 1)], w[(2, 2)])]
                    if base is None:
                        base = combo
                    elif combo != base:
                        ok = False
                tmp = [((zu,) + key[1:], sign * coeff)
                       for key, coeff in psibar if key[0] == 1 - zp]
                disp = _apply_perms_sparse(tmp, disp_perms)
                for r, fd in enumerate(lf.final_duals):
                    acc = Fraction(0)
                    for key, coeff in disp:
                        acc += coeff * fd[key]
                    if base[r] != CLOSING_FORM_FACTOR * acc:
                        ok = False
                if any(x != 0 for x in base):
                    hits += 1
                    if m == 0 and first_spot is None:
                        first_spot = (zidx, vi)
        if m == 0:
            first_hits = hits
        if hits:
            members_hit += 1

    # dense spot checks tying the sparse sweep to the public operator
    Z0 = vertical_basis(n)[0]
    a = obstruction_witness(quadruples[4], Z0, n, k)
    b = obstruction_witness(quadruples[5], Z0, n, k)
    dense_ok = (a == b
                and a == CLOSING_FORM_FACTOR * witness_display_value(Z0, n, k))
    if first_spot is not None:
        zidx, vi = first_spot
        Zs = Tensor.unit((PRIMED_UP, UNPRIMED_DOWN), n, zidx)
        psibar_spot = kernel[0] if k == 2 else kernel[0].outer(values[vi])
        acted = g1_action(Zs, JetComponent(3, EPS_UP.outer(psibar_spot)),
                          n, k)
        spot = phi_map((1, 1), acted, n, k)
        disp = witness_display_value(Zs, n, k, psibar=psibar_spot)
        dense_ok = (dense_ok
                    and all(phi_map(ij, acted, n, k) == spot
                            for ij in ((1, 2), (2, 1), (2, 2)))
                    and not spot.is_zero()
                    and spot == CLOSING_FORM_FACTOR * disp)

    ok = ok and dense_ok and first_hits > 0 and members_hit == len(kernel)
    out.append(report(
        f"obstruction-witness({n},{k})",
        "coefficient-independent-nonzero-witness",
        ok,
        n=n, k=k, endomorphisms=2 * n, value_basis=len(values),
        first_member_pairs=first_hits, members_nonzero=members_hit,
        witness_space=len(kernel), dense_spots=dense_ok,
        closing_form_factor=int(CLOSING_FORM_FACTOR),
        quadruples=len(quadruples),
    ))
    return out


# -- deeper structural checks (full bases via sparse evaluation) --------------------


def _sparse_from_tensor(t: Tensor):
    """Nonzero entries of a tensor as (index tuple, value) pairs."""
    out = []
    for idx in np.ndindex(*t.shape):
        v = t.data[idx]
        if v != 0:
            out.append((idx, v))
    return out


def _apply_perms_sparse(items, perms):
    """Push sparse (index, value) pairs through (permutation, scale) terms.

    Mirrors dense ``transpose``: a unit at index u lands at the index y
    with y[i] = u[perm[i]].
    """
    out = []
    for key, coeff in items:
        for perm, scale in perms:
            out.append((tuple(key[p] for p in perm), coeff * scale))
    return out


class _LiftFunctionals:
    """Transported duals evaluating full lifts on sparse layers.

    For lift (i, j) and target-basis index r,
    ``<target_r, phi_map((i,j), psi)> = scale_ij * <xi[j][r], c_i(psi)>``
    where the xi are the target duals pushed through the final projection
    stages and the pairing arrangements.  Evaluating a lift on a sparse
    degree-four layer therefore costs a few dictionary lookups per entry.
    """

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.space = realization((k, k), n)
        dgm = self.space.diagram
        norm = 1 / self.space.normalization
        back = _inverse_perm(_target_arrangement(k, 2 * k))
        funcs22 = _pairing_functionals(n)
        self.per_pairing: dict[int, list[np.ndarray]] = {}
        pulled = []
        for base in self.space.basis:
            d = young.apply_projector(dgm, base) * norm
            pulled.append(d.transpose(back))
        # duals through the final projection alone, for closing-form values
        self.final_duals = [p.data for p in pulled]
        for j in _PAIRING_ARRANGEMENTS:
            self.per_pairing[j] = []
            for d in pulled:
                # adjoint of the two column projection with riding value slots
                p22 = young.apply_projector(funcs22.space.diagram, d,
                                            [0, 1, 2, 3])
                p22 = p22 * (1 / funcs22.space.normalization)
                xi = _arrangement_combination(j, p22, adjoint=True)
                self.per_pairing[j].append(xi.data)

    def lift_coords_sparse(self, ij, citems: dict):
        i, j = ij
        scale = Fraction(1) if i == j else Fraction(-2)
        out = []
        for xi in self.per_pairing[j]:
            acc = Fraction(0)
            for key, coeff in citems.items():
                acc += coeff * xi[key]
            out.append(scale * acc)
        return out


_LIFT_FUNCTIONALS: dict[tuple[int, int], _LiftFunctionals] = {}


def _lift_functionals(n: int, k: int) -> _LiftFunctionals:
    key = (n, k)
    if key not in _LIFT_FUNCTIONALS:
        _LIFT_FUNCTIONALS[key] = _LiftFunctionals(n, k)
    return _LIFT_FUNCTIONALS[key]


def _value_factor_basis(n: int, k: int) -> list[Tensor]:
    if k == 2:
        return [Tensor.scalar(1)]
    space = realization((k - 2, k - 2), n)
    return [Tensor(t.kinds, t.data, 2 - k) for t in space.basis]


def _layer_units(n: int, k: int):
    """Spanning set of degree-three layers: coordinate units in the three
    argument pairs times a basis of the value factor, sparsely encoded."""
    arg_kinds = (PRIMED_UP,) * 3 + (UNPRIMED_DOWN,) * 3
    values = [_sparse_from_tensor(v) for v in _value_factor_basis(n, k)]
    for idx in np.ndindex(*(2, 2, 2, n, n, n)):
        for vitems in values:
            if vitems and vitems[0][0] == ():
                yield [(idx, vitems[0][1])]
            else:
                yield [(idx + vkey, vval) for vkey, vval in vitems]


def verify_leibniz_projection_kill(n: int, k: int) -> VerificationReport:
    """Every Leibniz term of the action dies under every lift projection.

    Checked for all lifts on the full product basis (endomorphism units
    times layer units times value-factor basis) through the sparse
    functional route; for k = 2 the Leibniz half is identically zero
    because the density weight vanishes and there are no value slots.
    """
    nv = 2 * (k - 2)
    if k == 2:
        psi = witness_layer(n, 2)
        zero = all(
            action_leibniz_terms(Z, psi, n, 2).value.is_zero()
            for Z in vertical_basis(n)
        )
        return report(f"leibniz-kill({n},{k})",
                      "removed-argument-terms-die-in-projection", zero,
                      n=n, k=k, mode="identically-zero")
    funcs = _lift_functionals(n, k)
    perms = _leibniz_permutations(nv, k)
    ok = True
    checked = 0
    for zidx, _ in iter_basis((PRIMED_UP, UNPRIMED_DOWN), n):
        for items in _layer_units(n, k):
            prod = [(zidx + key, coeff) for key, coeff in items]
            terms = _apply_perms_sparse(prod, perms)
            checked += 1
            for i in (1, 2):
                citems = _contract_sparse(i, terms)
                for j in (1, 2):
                    coords = funcs.lift_coords_sparse((i, j), citems)
                    if any(c != 0 for c in coords):
                        ok = False
        if not ok:
            break
    return report(f"leibniz-kill({n},{k})",
                  "removed-argument-terms-die-in-projection", ok,
                  n=n, k=k, instances=checked, mode="full-basis")


def verify_symmetric_action_vanishing(n: int, k: int) -> VerificationReport:
    """The lifts annihilate acted layers symmetric in their three arguments.

    This is the equivariance of the symmetric restriction: on a spanning
    set of symmetric degree-three layers, both contraction patterns kill
    the insertion half outright, and the full action (with the Leibniz
    half) is killed by every lift.  Sparse evaluation keeps full spanning
    sets affordable at every instance.
    """
    nv = 2 * (k - 2)
    funcs = _lift_functionals(n, k)
    ins_perms = _insertion_permutations(nv)
    lei_perms = _leibniz_permutations(nv, k)
    values = [_sparse_from_tensor(v) for v in _value_factor_basis(n, k)]
    pair_values = [(p, a) for p in range(2) for a in range(n)]
    ok_contractions = True
    ok_lifts = True
    checked = 0
    for zidx, _ in iter_basis((PRIMED_UP, UNPRIMED_DOWN), n):
        for combo in itertools.combinations_with_replacement(pair_values, 3):
            orderings = set(itertools.permutations(combo))
            for vitems in values:
                items = []
                for arrangement in orderings:
                    argkey = (tuple(a[0] for a in arrangement)
                              + tuple(a[1] for a in arrangement))
                    if vitems and vitems[0][0] == ():
                        items.append((argkey, vitems[0][1]))
                    else:
                        items.extend((argkey + vk, vv) for vk, vv in vitems)
                prod = [(zidx + key, coeff) for key, coeff in items]
                ins = _apply_perms_sparse(prod, ins_perms)
                both = ins + _apply_perms_sparse(prod, lei_perms)
                checked += 1
                for i in (1, 2):
                    if any(v != 0 for v in _contract_sparse(i, ins).values()):
                        ok_contractions = False
                    citems = _contract_sparse(i, both)
                    for j in (1, 2):
                        coords = funcs.lift_coords_sparse((i, j), citems)
                        if any(c != 0 for c in coords):
                            ok_lifts = False
        if not (ok_contractions and ok_lifts):
            break
    return report(
        f"symmetric-action-vanishing({n},{k})",
        "lifts-annihilate-action-of-symmetric-layers",
        ok_contractions and ok_lifts,
        n=n, k=k, instances=checked,
        insertion_contractions_vanish=ok_contractions,
    )


def verify_lift_agreement_on_image(n: int, k: int) -> VerificationReport:
    """All four lifts agree on the whole image of the action.

    Runs over the full product basis of endomorphisms and degree-three
    layers (argument units times value-factor basis), comparing the four
    lift coordinate vectors of each acted layer through the sparse route.
    """
    nv = 2 * (k - 2)
    funcs = _lift_functionals(n, k)
    ins_perms = _insertion_permutations(nv)
    lei_perms = _leibniz_permutations(nv, k)
    ok = True
    checked = 0
    for zidx, _ in iter_basis((PRIMED_UP, UNPRIMED_DOWN), n):
        for items in _layer_units(n, k):
            prod = [(zidx + key, coeff) for key, coeff in items]
            terms = (_apply_perms_sparse(prod, ins_perms)
                     + _apply_perms_sparse(prod, lei_perms))
            c = {i: _contract_sparse(i, terms) for i in (1, 2)}
            coords = [funcs.lift_coords_sparse((i, j), c[i])
                      for i in (1, 2) for j in (1, 2)]
            checked += 1
            if any(coords[0] != other for other in coords[1:]):
                ok = False
        if not ok:
            break
    return report(
        f"lift-agreement-on-image({n},{k})",
        "four-lifts-agree-on-whole-action-image",
        ok, n=n, k=k, instances=checked,
    )
