"""Truncated s-adic integers.

An element of Z_s is stored through its first ``depth`` base-s digits
(little-endian), so arithmetic is exact modulo ``s**depth``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class SAdicError(ValueError):
    """Raised on base or depth mismatch."""


@dataclass(frozen=True)
class SAdicInt:
    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise SAdicError(f"base must be >= 2, got {self.base}")
        if len(self.digits) < 1:
            raise SAdicError("depth must be >= 1")
        if any(not 0 <= x < self.base for x in self.digits):
            raise SAdicError(f"digits out of range for base {self.base}: {self.digits}")

    @classmethod
    def from_int(cls, k: int, base: int, depth: int) -> SAdicInt:
        """Embed an integer; negatives use s-complement digits (-1 -> all s-1)."""
        k %= base**depth
        digits = []
        for _ in range(depth):
            k, r = divmod(k, base)
            digits.append(r)
        return cls(base, tuple(digits))

    @property
    def depth(self) -> int:
        return len(self.digits)

    def to_int(self) -> int:
        """Representative in ``[0, s**depth)``."""
        value = 0
        for x in reversed(self.digits):
            value = value * self.base + x
        return value

    def _check(self, other: SAdicInt):
        if not isinstance(other, SAdicInt):
            return NotImplemented
        if other.base != self.base or other.depth != self.depth:
            raise SAdicError(
                f"mismatch: base {self.base}/depth {self.depth} vs base {other.base}/depth {other.depth}"
            )

    def __add__(self, other: SAdicInt) -> SAdicInt:
        self._check(other)
        s = self.base
        out, carry = [], 0
        for a, b in zip(self.digits, other.digits):
            carry, r = divmod(a + b + carry, s)
            out.append(r)
        return SAdicInt(s, tuple(out))

    def __neg__(self) -> SAdicInt:
        s = self.base
        # s-complement: (s-1 - x_j) for every digit, then add one
        flipped = SAdicInt(s, tuple(s - 1 - x for x in self.digits))
        return flipped + SAdicInt.from_int(1, s, self.depth)

    def __sub__(self, other: SAdicInt) -> SAdicInt:
        return self + (-other)

    def __mul__(self, other: SAdicInt) -> SAdicInt:
        self._check(other)
        s, d = self.base, self.depth
        acc = [0] * d
        for i, a in enumerate(self.digits):
            if a == 0:
                continue
            for j in range(d - i):
                acc[i + j] += a * other.digits[j]
        out, carry = [], 0
        for v in acc:
            carry, r = divmod(v + carry, s)
            out.append(r)
        return SAdicInt(s, tuple(out))

    @property
    def zero_at_depth(self) -> bool:
        """True when every stored digit vanishes (valuation >= depth)."""
        return not any(self.digits)

    def valuation(self) -> int | None:
        for i, x in enumerate(self.digits):
            if x:
                return i
        return None

    def to_json(self) -> dict:
        return {"s": self.base, "digits": list(self.digits)}

    @classmethod
    def from_json(cls, data: dict) -> SAdicInt:
        return cls(int(data["s"]), tuple(int(x) for x in data["digits"]))


def snorm(a: SAdicInt) -> Fraction:
    """|a|_s = s**(-n) with n the first nonzero digit; 0 if zero at this depth."""
    n = a.valuation()
    if n is None:
        return Fraction(0)
    return Fraction(1, a.base**n)


ZERO = None  # valuation_split result for an element that vanishes at its depth


@dataclass(frozen=True)
class ValuationSplit:
    m: int
    unit: SAdicInt

    def recombine(self) -> SAdicInt:
        """s**m * unit, as an element of the original depth."""
        s = self.unit.base
        return SAdicInt(s, (0,) * self.m + self.unit.digits)


def valuation_split(a: SAdicInt) -> ValuationSplit | None:
    """Write a = s**m * unit with digit 0 of ``unit`` nonzero; ``ZERO`` (None) if a vanishes."""
    m = a.valuation()
    if m is None:
        return ZERO
    return ValuationSplit(m, SAdicInt(a.base, a.digits[m:]))


@lru_cache(maxsize=None)
def unit_residues(s: int, e: int) -> tuple[int, ...]:
    """Residues r mod s**e with s not dividing r, ascending."""
    if e < 1:
        raise ValueError("residue depth must be >= 1")
    return tuple(r for r in range(s**e) if r % s)


def unit_index(s: int, e: int, r: int) -> int:
    """Position of the unit residue ``r mod s**e`` in :func:`unit_residues`."""
    r %= s**e
    if r % s == 0:
        raise ValueError(f"{r} is not a unit residue mod {s}")
    return r - (r + s - 1) // s


def split_int(l: int, s: int) -> tuple[int, int]:
    """Decompose a nonzero integer l = s**m * l' with s not dividing l'."""
    if l == 0:
        raise ValueError("0 has no valuation split")
    m = 0
    while l % s == 0:
        l //= s
        m += 1
    return m, l
