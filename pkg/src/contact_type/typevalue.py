"""Type values with certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .poly import INF

CERTIFICATES = ("exact", "lower_bound", "upper_bound", "sampled_generic")


def as_value(v):
    """Normalize to Fraction or INF."""
    if v is None:
        return None
    if v == INF:
        return INF
    return Fraction(v)


def value_json(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    v = Fraction(v)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def value_from_json(obj):
    if obj is None:
        return None
    if obj == "inf":
        return INF
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, str) and "/" in obj:
        a, b = obj.split("/")
        return Fraction(int(a), int(b))
    return Fraction(obj)


def value_str(v) -> str:
    if v is None:
        return "?"
    if v == INF:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class TypeValue:
    """An invariant value in [1, inf] (0 for the unit ideal) with provenance.

    ``lower`` and ``upper`` are the best bounds behind ``value``; ``value`` is
    the point estimate reported for the certificate kind.
    """

    value: Any
    certificate: str
    lower: Any = None
    upper: Any = None
    witnesses: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.certificate not in CERTIFICATES:
            raise ValueError(f"unknown certificate {self.certificate!r}")
        self.value = as_value(self.value)
        self.lower = as_value(self.lower)
        self.upper = as_value(self.upper)
        if self.certificate == "exact":
            if self.lower is None:
                self.lower = self.value
            if self.upper is None:
                self.upper = self.value

    @property
    def is_exact(self) -> bool:
        return self.certificate == "exact"

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    def interval(self):
        """(lo, hi) used when comparing values; exact and sampled values count as points."""
        if self.certificate in ("exact", "sampled_generic"):
            return (self.value, self.value)
        if self.certificate == "lower_bound":
            return (self.value, self.upper if self.upper is not None else INF)
        return (self.lower if self.lower is not None else Fraction(0), self.value)

    def to_json(self) -> Dict[str, Any]:
        out = {
            "value": value_json(self.value),
            "certificate": self.certificate,
            "lower": value_json(self.lower),
            "upper": value_json(self.upper),
        }
        if self.witnesses:
            out["witnesses"] = {k: _jsonable(self.witnesses[k]) for k in sorted(self.witnesses)}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def __str__(self):
        s = f"{value_str(self.value)} ({self.certificate}"
        if not self.is_exact and (self.lower is not None or self.upper is not None):
            s += f"; bounds [{value_str(self.lower)}, {value_str(self.upper)}]"
        return s + ")"


def _jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, Fraction) or obj == INF:
        return value_json(obj)
    return obj


def vmin(values):
    vals = [v for v in values if v is not None]
    return min(vals) if vals else None


def vmax(values):
    vals = [v for v in values if v is not None]
    return max(vals) if vals else None
