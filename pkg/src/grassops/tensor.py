"""Dense tensors with exact rational entries and typed index slots.

Every tensor slot carries an :class:`IndexKind`, which records the index
family and whether the slot is contravariant (``up=True``) or covariant.
Three families exist:

``primed``
    Two dimensional auxiliary factor.  Raising and lowering these slots is
    done with the fixed skew forms :data:`EPS_UP` and :data:`EPS_DOWN` and
    shifts the density weight by one.
``unprimed``
    The n-dimensional factor.  No raising or lowering is available.
``tractor``
    The (n+2)-dimensional factor.  By convention coordinates 0 and 1 of a
    tractor slot span the primed directions and coordinates 2..n+1 the
    unprimed ones.

Components are stored in numpy object arrays holding Python ints and
:class:`fractions.Fraction` values, so all arithmetic is exact.  Tensors are
immutable: operations return new instances and the underlying buffers are
marked read-only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

PRIMED = "primed"
UNPRIMED = "unprimed"
TRACTOR = "tractor"

_FAMILIES = (PRIMED, UNPRIMED, TRACTOR)


@dataclass(frozen=True)
class IndexKind:
    """Family and variance of one tensor slot."""

    family: str
    up: bool

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown index family {self.family!r}")

    @property
    def dual(self) -> "IndexKind":
        """The kind obtained by flipping the variance."""
        return IndexKind(self.family, not self.up)

    def dim(self, n: int) -> int:
        """Fibre dimension of this slot when the unprimed factor has dimension n."""
        if self.family == PRIMED:
            return 2
        if self.family == UNPRIMED:
            return n
        return n + 2

    def __repr__(self) -> str:
        arrow = "up" if self.up else "down"
        return f"{self.family}:{arrow}"


PRIMED_UP = IndexKind(PRIMED, True)
PRIMED_DOWN = IndexKind(PRIMED, False)
UNPRIMED_UP = IndexKind(UNPRIMED, True)
UNPRIMED_DOWN = IndexKind(UNPRIMED, False)
TRACTOR_UP = IndexKind(TRACTOR, True)
TRACTOR_DOWN = IndexKind(TRACTOR, False)


def _as_object_array(data) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    if arr.ndim == 0 and not isinstance(arr.item(), (int, Fraction)):
        raise TypeError(f"entries must be int or Fraction, got {type(arr.item())}")
    return arr


class Tensor:
    """Immutable dense tensor over the rationals.

    Parameters
    ----------
    kinds : sequence of IndexKind
        One entry per slot, in storage order.
    data : array-like
        Nested sequence or numpy array of ints / Fractions with one axis
        per slot.
    weight : int
        Density weight.  Addition requires equal weights; tensor products
        add them; raising or lowering a primed slot shifts it by one.
    """

    __slots__ = ("kinds", "data", "weight")

    def __init__(self, kinds: Sequence[IndexKind], data, weight: int = 0):
        kinds = tuple(kinds)
        arr = _as_object_array(data)
        if arr.ndim != len(kinds):
            raise ValueError(
                f"data has {arr.ndim} axes but {len(kinds)} kinds were given"
            )
        for kind, d in zip(kinds, arr.shape):
            if kind.family == PRIMED and d != 2:
                raise ValueError(f"primed slots have dimension 2, got {d}")
        unprimed_dims = {d for k, d in zip(kinds, arr.shape) if k.family == UNPRIMED}
        tractor_dims = {d for k, d in zip(kinds, arr.shape) if k.family == TRACTOR}
        if len(unprimed_dims) > 1 or len(tractor_dims) > 1:
            raise ValueError("inconsistent slot dimensions within a family")
        if unprimed_dims and tractor_dims:
            if tractor_dims.pop() != unprimed_dims.pop() + 2:
                raise ValueError("tractor slots must have dimension n + 2")
        arr.setflags(write=False)
        self.kinds = kinds
        self.data = arr
        self.weight = weight

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, kinds: Sequence[IndexKind], n: int, weight: int = 0) -> "Tensor":
        """All-zero tensor with the given signature."""
        shape = tuple(k.dim(n) for k in kinds)
        return cls(kinds, np.zeros(shape, dtype=object), weight)

    @classmethod
    def scalar(cls, value, weight: int = 0) -> "Tensor":
        """Rank-zero tensor holding a single rational value."""
        return cls((), np.array(value, dtype=object), weight)

    @classmethod
    def unit(cls, kinds: Sequence[IndexKind], n: int, index: Sequence[int],
             weight: int = 0) -> "Tensor":
        """Basis tensor with a single entry 1 at the given multi-index."""
        shape = tuple(k.dim(n) for k in kinds)
        arr = np.zeros(shape, dtype=object)
        arr[tuple(index)] = 1
        return cls(kinds, arr, weight)

    @classmethod
    def from_function(cls, kinds: Sequence[IndexKind], n: int,
                      fn: Callable[..., object], weight: int = 0) -> "Tensor":
        """Fill a tensor by evaluating ``fn`` on every multi-index."""
        shape = tuple(k.dim(n) for k in kinds)
        arr = np.zeros(shape, dtype=object)
        for idx in np.ndindex(*shape):
            arr[idx] = fn(*idx)
        return cls(kinds, arr, weight)

    # -- basic properties -----------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.kinds)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def item(self):
        """The value of a rank-zero tensor."""
        if self.kinds:
            raise ValueError("item() requires a rank-zero tensor")
        return self.data.item()

    def is_zero(self) -> bool:
        return not np.any(self.data != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.kinds == other.kinds
                and self.weight == other.weight
                and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self) -> str:
        return f"Tensor(kinds={list(self.kinds)}, shape={self.shape}, weight={self.weight})"

    # -- linear structure -------------------------------------------------

    def _check_same_signature(self, other: "Tensor", op: str) -> None:
        if self.kinds != other.kinds or self.shape != other.shape:
            raise TypeError(f"{op} requires identical signatures, "
                            f"got {self.kinds} vs {other.kinds}")
        if self.weight != other.weight:
            raise TypeError(f"{op} requires equal density weights, "
                            f"got {self.weight} vs {other.weight}")

    def __add__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        self._check_same_signature(other, "addition")
        return Tensor(self.kinds, self.data + other.data, self.weight)

    def __sub__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        self._check_same_signature(other, "subtraction")
        return Tensor(self.kinds, self.data - other.data, self.weight)

    def __neg__(self) -> "Tensor":
        return Tensor(self.kinds, -self.data, self.weight)

    def __mul__(self, scalar) -> "Tensor":
        if isinstance(scalar, Tensor):
            return NotImplemented
        return Tensor(self.kinds, self.data * scalar, self.weight)

    __rmul__ = __mul__

    # -- multilinear operations -------------------------------------------

    def outer(self, other: "Tensor") -> "Tensor":
        """Tensor product; the slots of ``other`` follow those of ``self``."""
        data = np.multiply.outer(self.data, other.data)
        return Tensor(self.kinds + other.kinds, data, self.weight + other.weight)

    def transpose(self, perm: Sequence[int]) -> "Tensor":
        """Reorder slots so that new slot i is old slot ``perm[i]``."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.rank)):
            raise ValueError(f"{perm} is not a permutation of the slots")
        kinds = tuple(self.kinds[p] for p in perm)
        return Tensor(kinds, np.transpose(self.data, perm), self.weight)

    def contract(self, i: int, j: int) -> "Tensor":
        """Trace slot i against slot j (same family, opposite variance)."""
        ki, kj = self.kinds[i], self.kinds[j]
        if ki.family != kj.family or ki.up == kj.up:
            raise TypeError(f"cannot contract {ki} with {kj}")
        data = np.trace(self.data, axis1=i, axis2=j)
        kinds = tuple(k for p, k in enumerate(self.kinds) if p not in (i, j))
        return Tensor(kinds, data, self.weight)

    def contract_with(self, other: "Tensor",
                      pairs: Sequence[tuple[int, int]]) -> "Tensor":
        """Contract slots of ``self`` against dual slots of ``other``.

        ``pairs`` lists ``(i, j)`` with slot i of ``self`` contracted
        against slot j of ``other``.  Remaining slots of ``self`` come
        first in the result, then remaining slots of ``other``.
        """
        is_, js = [], []
        for i, j in pairs:
            ki, kj = self.kinds[i], other.kinds[j]
            if ki.family != kj.family or ki.up == kj.up:
                raise TypeError(f"cannot contract {ki} with {kj}")
            is_.append(i)
            js.append(j)
        data = np.tensordot(self.data, other.data, axes=(is_, js))
        kinds = (tuple(k for p, k in enumerate(self.kinds) if p not in is_)
                 + tuple(k for p, k in enumerate(other.kinds) if p not in js))
        if not kinds:
            data = np.asarray(data, dtype=object)
        return Tensor(kinds, data, self.weight + other.weight)

    def _perm_combine(self, positions: Sequence[int], signed: bool) -> "Tensor":
        positions = list(positions)
        if len(set(positions)) != len(positions):
            raise ValueError("positions must be distinct")
        kinds = {self.kinds[p] for p in positions}
        if len(kinds) > 1:
            raise TypeError(f"slots {positions} have mixed kinds {kinds}")
        acc = None
        for perm in itertools.permutations(range(len(positions))):
            axes = list(range(self.rank))
            for tgt, src in enumerate(perm):
                axes[positions[tgt]] = positions[src]
            term = np.transpose(self.data, axes)
            if signed:
                sign = _permutation_sign(perm)
                term = term if sign == 1 else -term
            acc = term.copy() if acc is None else acc + term
        scale = Fraction(1, math.factorial(len(positions)))
        return Tensor(self.kinds, acc * scale, self.weight)

    def symmetrize(self, positions: Sequence[int]) -> "Tensor":
        """Average over permutations of the given slots."""
        return self._perm_combine(positions, signed=False)

    def alternate(self, positions: Sequence[int]) -> "Tensor":
        """Signed average over permutations of the given slots."""
        return self._perm_combine(positions, signed=True)

    # -- primed raising and lowering ---------------------------------------

    def raise_primed(self, pos: int) -> "Tensor":
        """Convert a covariant primed slot to contravariant (weight + 1)."""
        if self.kinds[pos] != PRIMED_DOWN:
            raise TypeError(f"slot {pos} is {self.kinds[pos]}, expected primed:down")
        data = np.tensordot(self.data, _EPS_UP_DATA, axes=([pos], [0]))
        data = np.moveaxis(data, -1, pos)
        kinds = self.kinds[:pos] + (PRIMED_UP,) + self.kinds[pos + 1:]
        return Tensor(kinds, data, self.weight + 1)

    def lower_primed(self, pos: int) -> "Tensor":
        """Convert a contravariant primed slot to covariant (weight - 1)."""
        if self.kinds[pos] != PRIMED_UP:
            raise TypeError(f"slot {pos} is {self.kinds[pos]}, expected primed:up")
        data = np.tensordot(self.data, _EPS_DOWN_DATA, axes=([pos], [0]))
        data = np.moveaxis(data, -1, pos)
        kinds = self.kinds[:pos] + (PRIMED_DOWN,) + self.kinds[pos + 1:]
        return Tensor(kinds, data, self.weight - 1)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def iter_basis(kinds: Sequence[IndexKind], n: int,
               weight: int = 0) -> Iterator[tuple[tuple, Tensor]]:
    """Yield ``(multi_index, unit_tensor)`` over the full coordinate basis."""
    shape = tuple(k.dim(n) for k in kinds)
    for idx in np.ndindex(*shape):
        yield idx, Tensor.unit(kinds, n, idx, weight)


# Fixed symplectic forms on the primed factor.  The contravariant form has
# entry +1 at position (0, 1); the covariant form is its matrix inverse, so
# the round trip lower(raise(v)) is the identity.
_EPS_UP_DATA = np.array([[0, 1], [-1, 0]], dtype=object)
_EPS_DOWN_DATA = np.array([[0, -1], [1, 0]], dtype=object)
_EPS_UP_DATA.setflags(write=False)
_EPS_DOWN_DATA.setflags(write=False)

EPS_UP = Tensor((PRIMED_UP, PRIMED_UP), _EPS_UP_DATA, weight=1)
EPS_DOWN = Tensor((PRIMED_DOWN, PRIMED_DOWN), _EPS_DOWN_DATA, weight=-1)


@dataclass(frozen=True)
class Epsilon:
    """The pair of mutually inverse skew forms on the primed factor."""

    up: Tensor
    down: Tensor


EPSILON = Epsilon(EPS_UP, EPS_DOWN)
