from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import format_rational


def _to_str(v) -> object:
    if isinstance(v, bool):
        return v
    if isinstance(v, (Fraction, int)):
        return format_rational(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return [_to_str(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _to_str(x) for k, x in v.items()}
    return str(v)


@dataclass
class VerificationRecord:
    """Outcome of re-deriving one claim: the values computed and every check made."""

    claim_id: str
    family: str
    N: int | None
    inputs: dict = field(default_factory=dict)
    computed_values: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = bool(ok)
        return bool(ok)

    def value(self, name: str, v):
        self.computed_values[name] = v
        return v

    @property
    def verdict(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "family": self.family,
            "N": self.N,
            "inputs": _to_str(self.inputs),
            "computed_values": _to_str(self.computed_values),
            "checks": dict(self.checks),
            "verdict": "pass" if self.verdict else "fail",
        }
