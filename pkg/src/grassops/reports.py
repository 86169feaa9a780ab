"""Structured results for verification commands.

Each check produces a :class:`VerificationReport` carrying a stable id, a
short anchor naming the claim it checks, a pass/fail status and a details
mapping with recorded constants or a counterexample summary.  Reports
render deterministically (no timestamps, no environment data) so repeated
runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class VerificationReport:
    """Outcome of one verification check."""

    id: str
    anchor: str
    status: str  # "pass" or "fail"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "details": _jsonable(self.details),
        }

    def render_text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.id}  ({self.anchor})"]
        for key in sorted(self.details):
            lines.append(f"    {key}: {_render_value(self.details[key])}")
        return "\n".join(lines)


def _render_value(value) -> str:
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(_jsonable(value), sort_keys=True)
    return str(_jsonable(value))


def report(check_id: str, anchor: str, ok: bool, **details) -> VerificationReport:
    """Convenience constructor."""
    return VerificationReport(check_id, anchor, "pass" if ok else "fail", details)
