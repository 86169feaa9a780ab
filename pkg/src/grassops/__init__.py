"""Exact rational calculus for two column composition series.

The package computes, in exact rational arithmetic, the composition series
and Casimir eigenvalues of a family of two column bundles, an explicit
realization of their sections with a slotwise graded action, the symbol
compositions along the two middle branches, and the obstruction pairing
identities.  Every numerical claim is backed by a verification routine
returning a structured :class:`~grassops.reports.VerificationReport`.
"""

from .errors import EngineDefectError, GrassopsError, UsageError
from .forms import (
    CompositionSeries,
    IrreducibleBundle,
    decompose_forms,
    eigenvalue_table,
    two_column_series,
)
from .lcg import Lcg
from .reports import VerificationReport
from .tensor import (
    EPS_DOWN,
    EPS_UP,
    PRIMED_DOWN,
    PRIMED_UP,
    TRACTOR_DOWN,
    TRACTOR_UP,
    UNPRIMED_DOWN,
    UNPRIMED_UP,
    IndexKind,
    Tensor,
)
from .tractor import (
    TwoColumnSection,
    bullet,
    bullet_on_components,
    calculus,
    nonstandard_symbol,
    symbol_path,
    verify_balpha,
    verify_bullet_action,
    verify_md_vanish,
    verify_projection_kills_symmetric,
    verify_roundtrip,
    verify_symbol_paths,
)
from .verma import verify_obstruction
from .young import YoungDiagram

__version__ = "0.1.0"

__all__ = [
    "CompositionSeries",
    "EPS_DOWN",
    "EPS_UP",
    "EngineDefectError",
    "GrassopsError",
    "IndexKind",
    "IrreducibleBundle",
    "Lcg",
    "PRIMED_DOWN",
    "PRIMED_UP",
    "TRACTOR_DOWN",
    "TRACTOR_UP",
    "Tensor",
    "TwoColumnSection",
    "UNPRIMED_DOWN",
    "UNPRIMED_UP",
    "VerificationReport",
    "YoungDiagram",
    "bullet",
    "bullet_on_components",
    "calculus",
    "decompose_forms",
    "eigenvalue_table",
    "nonstandard_symbol",
    "symbol_path",
    "two_column_series",
    "verify_balpha",
    "verify_bullet_action",
    "verify_md_vanish",
    "verify_obstruction",
    "verify_projection_kills_symmetric",
    "verify_roundtrip",
    "verify_symbol_paths",
    "__version__",
]
