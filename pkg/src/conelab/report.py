"""Machine-readable outcomes of identity checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .params import DomainParams, fmt_fraction, fmt_partition

EXACT_ZERO = "exact-zero"
WITHIN_TOLERANCE = "within-tolerance"
FAILED = "failed"


class VerificationFailure(AssertionError):
    def __init__(self, message: str, report: "VerificationReport | None" = None):
        super().__init__(message)
        self.report = report


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_fraction(x)
    if isinstance(x, DomainParams):
        return x.to_json()
    if isinstance(x, tuple) and all(isinstance(t, int) for t in x):
        return fmt_partition(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class VerificationReport:
    identity: str
    params: Dict[str, Any]
    status: str
    n: Optional[tuple] = None
    residual_terms: List[Dict[str, str]] = field(default_factory=list)
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)
    runtime_ms: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    def to_json(self, include_runtime: bool = False) -> dict:
        out: Dict[str, Any] = {
            "identity": self.identity,
            "params": _jsonable(self.params),
        }
        if self.n is not None:
            out["n"] = fmt_partition(self.n)
        out["status"] = self.status
        if self.residual_terms or self.residual is None:
            out["residual_terms"] = self.residual_terms
        if self.residual is not None:
            out["residual"] = self.residual
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.seed is not None:
            out["seed"] = self.seed
        if self.details:
            out["details"] = _jsonable(self.details)
        if include_runtime and self.runtime_ms is not None:
            out["runtime_ms"] = self.runtime_ms
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def exact_residual_terms(terms: Dict[tuple, Fraction], label: str = "monomial") -> List[Dict[str, str]]:
    """Serialize an exact residual ``{exponent: coeff}`` deterministically."""
    out = []
    for e, c in sorted(terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0]))):
        out.append({label: ",".join(str(x) for x in e), "coeff": fmt_fraction(c)})
    return out


def tolerance_status(ok: bool) -> str:
    return WITHIN_TOLERANCE if ok else FAILED
