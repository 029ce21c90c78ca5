"""Certified nonnegative real values: exact, interval-bounded or infinite."""

from __future__ import annotations

import math
from dataclasses import dataclass

# relative slack used when comparing float-evaluated norms
CERT_RTOL = 1e-10
CERT_ATOL = 1e-12


@dataclass(frozen=True)
class NormValue:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, v: float) -> NormValue:
        v = float(v)
        return cls(v, v)

    @classmethod
    def interval(cls, lower: float, upper: float) -> NormValue:
        return cls(float(lower), float(max(lower, upper)))

    @classmethod
    def infinite(cls) -> NormValue:
        return cls(math.inf, math.inf)

    @property
    def kind(self) -> str:
        if math.isinf(self.lower):
            return "infinite"
        return "exact" if self.lower == self.upper else "interval"

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def value(self) -> float:
        if self.kind != "exact":
            raise ValueError(f"{self.kind} norm has no single value")
        return self.lower

    @property
    def midpoint(self) -> float:
        return self.lower if math.isinf(self.upper) else 0.5 * (self.lower + self.upper)

    def __add__(self, other: NormValue) -> NormValue:
        return NormValue(self.lower + other.lower, self.upper + other.upper)

    def __mul__(self, other) -> NormValue:
        if isinstance(other, NormValue):
            return NormValue(_mul(self.lower, other.lower), _mul(self.upper, other.upper))
        c = float(other)
        if c < 0:
            raise ValueError("norm values scale by nonnegative reals only")
        return NormValue(_mul(self.lower, c), _mul(self.upper, c))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> NormValue:
        return NormValue(self.lower**k, self.upper**k)

    def plus(self, c: float) -> NormValue:
        return NormValue(self.lower + c, self.upper + c)

    def to_json(self) -> dict:
        if self.kind == "infinite":
            return {"kind": "infinite"}
        if self.kind == "exact":
            return {"kind": "exact", "value": self.lower}
        return {"kind": "interval", "lower": self.lower, "upper": None if math.isinf(self.upper) else self.upper}


def _mul(a: float, b: float) -> float:
    # 0 * inf is 0 here: a vanishing factor kills an unbounded one
    if a == 0 or b == 0:
        return 0.0
    return a * b


def nv_sum(values) -> NormValue:
    total = NormValue.exact(0.0)
    for v in values:
        total = total + v
    return total


def nv_max(values) -> NormValue:
    values = list(values)
    return NormValue(max(v.lower for v in values), max(v.upper for v in values))


def certify_le(lhs: NormValue, rhs: NormValue, rtol: float = CERT_RTOL, atol: float = CERT_ATOL) -> tuple[str, float]:
    """Decide lhs <= rhs: returns (status, margin) with status pass, fail or inconclusive.

    ``margin`` is lower(rhs) - upper(lhs) for passes and upper(rhs) - lower(lhs)
    otherwise; negative margins mean the inequality is (possibly) violated.
    """
    slack = rtol * max(abs(rhs.upper) if math.isfinite(rhs.upper) else abs(rhs.lower), 1.0) + atol
    if math.isinf(lhs.upper):
        if math.isinf(rhs.lower):
            return "pass", math.inf
        if math.isinf(lhs.lower):
            return "fail", -math.inf
        return "inconclusive", rhs.upper - lhs.lower
    if lhs.upper <= rhs.lower + slack:
        return "pass", rhs.lower - lhs.upper
    if lhs.lower > rhs.upper + slack:
        return "fail", rhs.upper - lhs.lower
    return "inconclusive", rhs.upper - lhs.lower


def certify_eq(lhs: NormValue, rhs: NormValue, rtol: float = CERT_RTOL, atol: float = CERT_ATOL) -> tuple[str, float]:
    """Decide lhs == rhs for exact values up to float round-off."""
    if lhs.kind == "infinite" and rhs.kind == "infinite":
        return "pass", 0.0
    a, b = certify_le(lhs, rhs, rtol, atol), certify_le(rhs, lhs, rtol, atol)
    gap = max(abs(lhs.upper - rhs.lower), abs(rhs.upper - lhs.lower))
    if a[0] == "pass" and b[0] == "pass":
        return "pass", -gap
    if "fail" in (a[0], b[0]):
        return "fail", -gap
    return "inconclusive", -gap
