"""Shared result record for the checker operations and CLI reports."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of a single verification check.

    ``witness`` identifies the first failing instance when ``passed`` is
    False; ``margin`` is the worst slack observed (negative means violated).
    A check annotated ``expected_fail`` counts as acceptable when it fails.
    """

    name: str
    passed: bool
    witness: object = None
    margin: float | None = None
    details: dict = field(default_factory=dict)
    expected_fail: bool = False

    @property
    def ok(self) -> bool:
        """Whether this record is acceptable in a consolidated report."""
        return self.passed or self.expected_fail

    def to_record(self) -> dict:
        rec = {
            "name": self.name,
            "passed": self.passed,
            "witness": _plain(self.witness),
            "margin": self.margin,
        }
        if self.expected_fail:
            rec["expected_fail"] = True
        if self.details:
            rec["details"] = _plain(self.details)
        return rec


def _plain(obj):
    """Recursively convert witnesses to JSON-friendly plain data."""
    from .distfn import DistributionFn

    if isinstance(obj, DistributionFn):
        return {
            "breakpoints": list(obj.breakpoints),
            "values": list(obj.values),
            "base_value": obj.base_value,
        }
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj) if not isinstance(obj, (set, frozenset)) else sorted(obj, key=repr)
        return [_plain(v) for v in items]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return repr(obj)
