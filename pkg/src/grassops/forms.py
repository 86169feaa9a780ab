"""Irreducible constituents and composition series bookkeeping.

An :class:`IrreducibleBundle` names an irreducible piece by three data: the
symmetric power ``s`` of the two dimensional contravariant factor, the
column heights ``columns`` of the covariant Young shape on the
n-dimensional factor, and the density weight ``w``.  Records serialize to
dicts with exactly those field names.

A :class:`CompositionSeries` is a tuple of slots in filtration order, each
slot a tuple of constituents (most slots have one; the middle of the main
two column series has two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import weights
from .errors import UsageError
from .young import YoungDiagram, dimension


@dataclass(frozen=True)
class IrreducibleBundle:
    """One irreducible constituent, named by (s, columns, w)."""

    s: int
    columns: tuple[int, ...]
    w: int

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if self.s < 0:
            raise ValueError(f"s must be nonnegative, got {self.s}")
        YoungDiagram(self.columns)  # validates shape

    @property
    def diagram(self) -> YoungDiagram:
        return YoungDiagram(self.columns)

    def to_record(self) -> dict:
        return {"s": self.s, "columns": list(self.columns), "w": self.w}

    @classmethod
    def from_record(cls, record: dict) -> "IrreducibleBundle":
        return cls(record["s"], tuple(record["columns"]), record["w"])

    def label(self) -> str:
        cols = ",".join(str(h) for h in self.columns)
        return f"(s={self.s}, columns=({cols}), w={self.w})"


def canonical(bundle: IrreducibleBundle, n: int) -> IrreducibleBundle | None:
    """Canonical form of a constituent over the n-dimensional factor.

    Columns taller than n carry no sections, so the constituent is zero
    and None is returned.  A column of exactly height n is a full top
    power, which is a density line: the column is removed and the weight
    drops by one.  Minus lowest weights are unchanged by this rewriting
    because the rank m fundamental weight with index n + 2 is zero.
    """
    if any(h > n for h in bundle.columns):
        return None
    kept = tuple(h for h in bundle.columns if h < n)
    wrapped = len(bundle.columns) - len(kept)
    return IrreducibleBundle(bundle.s, kept, bundle.w - wrapped)


def bundle_dimension(bundle: IrreducibleBundle, n: int) -> int:
    """Fibre dimension: (s + 1) times the Young shape dimension."""
    return (bundle.s + 1) * dimension(bundle.diagram, n)


@dataclass(frozen=True)
class CompositionSeries:
    """Slots of a filtration, each a tuple of irreducible constituents."""

    slots: tuple[tuple[IrreducibleBundle, ...], ...]

    def flat(self) -> list[IrreducibleBundle]:
        return [b for slot in self.slots for b in slot]

    def to_records(self) -> list[list[dict]]:
        return [[b.to_record() for b in slot] for slot in self.slots]


def decompose_forms(j: int, n: int) -> list[IrreducibleBundle]:
    """Irreducible constituents of the bundle of j-forms.

    The base has dimension 2n.  Constituents are indexed by the symmetric
    power s running over s = j mod 2, j mod 2 + 2, ..., subject to the
    Young shape ((j+s)/2, (j-s)/2) fitting into n rows; each comes with
    density weight (s - j)/2 before canonicalization.  Results are listed
    by ascending s.
    """
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    if j < 0:
        raise UsageError(f"form degree must be nonnegative, got {j}")
    if j > 2 * n:
        return []
    if j == 0:
        return [IrreducibleBundle(0, (), 0)]
    out = []
    for s in range(j % 2, j + 1, 2):
        tall = (j + s) // 2
        short = (j - s) // 2
        columns = tuple(h for h in (tall, short) if h > 0)
        raw = IrreducibleBundle(s, columns, (s - j) // 2)
        bundle = canonical(raw, n)
        if bundle is not None:
            out.append(bundle)
    return out


def form_component_count(j: int, n: int) -> int:
    """Number of irreducible constituents of the j-form bundle."""
    return len(decompose_forms(j, n))


def cotractor_form_series(k: int, n: int) -> CompositionSeries:
    """Composition series of the k-th exterior power of the dual standard column.

    Slots are listed in filtration order.  For 2 <= k <= n the slots are
    (0, (k-2,), +1), (1, (k-1,), +1), (0, (k,), 0), canonicalized; at the
    boundary values k = 1, n + 1, n + 2 some slots degenerate or vanish.
    """
    if not 1 <= k <= n + 2:
        raise UsageError(f"k must be in 1..{n + 2}, got {k}")
    raw = []
    if k >= 2:
        raw.append(IrreducibleBundle(0, tuple(h for h in (k - 2,) if h > 0), 1))
    raw.append(IrreducibleBundle(1, tuple(h for h in (k - 1,) if h > 0), 1))
    raw.append(IrreducibleBundle(0, (k,), 0))
    slots = []
    for bundle in raw:
        fixed = canonical(bundle, n)
        if fixed is not None:
            slots.append((fixed,))
    return CompositionSeries(tuple(slots))


def two_column_series(k: int, n: int) -> CompositionSeries:
    """Composition series of the main two column bundle, in filtration order.

    The five slots carry six constituents; the middle slot splits in two.
    Requires 2 <= k <= n.
    """
    if not 2 <= k <= n:
        raise UsageError(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")

    def col(*heights):
        return tuple(h for h in heights if h > 0)

    raw_slots = (
        (IrreducibleBundle(0, col(k - 2, k - 2), -k + 2),),
        (IrreducibleBundle(1, col(k - 1, k - 2), -k + 2),),
        (IrreducibleBundle(2, col(k - 1, k - 1), -k + 2),
         IrreducibleBundle(0, col(k, k - 2), -k + 1)),
        (IrreducibleBundle(1, col(k, k - 1), -k + 1),),
        (IrreducibleBundle(0, col(k, k), -k),),
    )
    slots = []
    for slot in raw_slots:
        fixed = tuple(b for b in (canonical(x, n) for x in slot) if b is not None)
        slots.append(fixed)
    return CompositionSeries(tuple(slots))


def eigenvalue_table(series: CompositionSeries, m: int):
    """Casimir eigenvalues of every constituent, slot by slot."""
    return tuple(
        tuple(weights.casimir_eigenvalue(weights.bundle_minus_lowest_weight(b, m))
              for b in slot)
        for slot in series.slots
    )


def total_form_dimension(j: int, n: int) -> int:
    """Sum of constituent dimensions of the j-form bundle.

    Must equal binomial(2n, j); the acceptance suite checks this for a
    range of degrees and dimensions.
    """
    return sum(bundle_dimension(b, n) for b in decompose_forms(j, n))


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)
