"""Trigonometric polynomials on R/Z and their x-dependent generalisation.

``TrigPoly`` stores phi(theta) = sum_n phi_n exp(2 pi i n theta) with finitely
many nonzero coefficients.  ``LambdaSymbol`` replaces every coefficient by an
m-independent :class:`DiagonalSymbol`, i.e. a function of the unit part x.

Sup norms are returned as certified intervals.  The lower end is a sampled
maximum; the upper end comes from a Bernstein-type grid estimate (see
:func:`sup_interval_from_coeffs`) capped by the l1 norm of the coefficients.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from math import comb

import numpy as np

from . import scalars as sc
from .intervals import NormValue
from .symbols import DiagonalSymbol, SymbolError

SUP_RTOL = 1e-6
_GRID_CAP = 1 << 20


def _is_zero_scalar(c) -> bool:
    if isinstance(c, sc.GaussianRational):
        return not c
    return abs(complex(c)) <= sc.FLOAT_ATOL


def sup_interval_from_coeffs(freqs: np.ndarray, coeffs: np.ndarray, rtol: float = SUP_RTOL) -> tuple[float, float]:
    """Certified bounds on sup_theta |sum_k c_k exp(2 pi i f_k theta)|.

    coeffs may be 2-D (one polynomial per row); the maximum over rows is bounded.
    With W the frequency span, |t|^2 is a real trigonometric polynomial of
    degree W, so Bernstein's inequality bounds its second derivative by
    (2 pi W)^2 max|t|^2.  Every point lies within 1/(2M) of an M-point grid
    node, hence max|t|^2 <= grid_max^2 / (1 - pi^2 W^2 / (2 M^2)).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if coeffs.size == 0 or len(freqs) == 0:
        return 0.0, 0.0
    l1 = float(np.abs(coeffs).sum(axis=1).max())
    if l1 == 0.0:
        return 0.0, 0.0
    fmin, fmax = int(min(freqs)), int(max(freqs))
    W = fmax - fmin
    if W == 0:
        v = float(np.abs(coeffs.sum(axis=1)).max())
        return v, v
    M = 16 * (W + 1)
    idx = np.asarray(freqs, dtype=int) - fmin
    while True:
        buf = np.zeros((coeffs.shape[0], M), dtype=complex)
        np.add.at(buf, (slice(None), idx), coeffs)
        vals = np.abs(np.fft.ifft(buf, axis=1)) * M
        grid = float(vals.max())
        roundoff = 8 * np.finfo(float).eps * l1 * math.log2(M)
        x = math.pi**2 * W**2 / (2.0 * M**2)
        upper = min(l1, (grid + roundoff) / math.sqrt(1.0 - x))
        lower = max(0.0, grid - roundoff)
        if upper - lower <= rtol * max(upper, 1e-300) or M >= _GRID_CAP:
            return lower, max(lower, upper)
        M *= 4


class TrigPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        for n, c in (coeffs or {}).items():
            c = sc.exact(c) if sc.is_exact_scalar(c) or isinstance(c, tuple) else complex(c)
            if not _is_zero_scalar(c):
                clean[int(n)] = c
        if clean and not all(isinstance(c, sc.GaussianRational) for c in clean.values()):
            clean = {n: sc.to_complex(c) for n, c in clean.items()}
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, c) -> TrigPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, n: int, c=1) -> TrigPoly:
        """c * exp(2 pi i n theta)."""
        return cls({n: c})

    @property
    def support(self) -> list[int]:
        return list(self.coeffs)

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, sc.GaussianRational) for c in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, n: int):
        return self.coeffs.get(n, sc.EXACT_ZERO if self.is_exact else 0j)

    def to_float(self) -> TrigPoly:
        return TrigPoly({n: sc.to_complex(c) for n, c in self.coeffs.items()})

    # algebra --------------------------------------------------------------

    def _combine(self, other: TrigPoly, sign: int) -> TrigPoly:
        out = dict(self.coeffs)
        exact_mode = self.is_exact and other.is_exact
        for n, c in other.coeffs.items():
            c = c if sign > 0 else -c
            if n in out:
                a = out[n]
                out[n] = a + c if exact_mode else sc.to_complex(a) + sc.to_complex(c)
            else:
                out[n] = c
        return TrigPoly(out)

    def __add__(self, other) -> TrigPoly:
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> TrigPoly:
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        return self._combine(other, -1)

    def __neg__(self) -> TrigPoly:
        return TrigPoly({n: -c for n, c in self.coeffs.items()})

    def __mul__(self, other) -> TrigPoly:
        if not isinstance(other, TrigPoly):
            return self.scale(other)
        exact_mode = self.is_exact and other.is_exact
        out: dict[int, object] = {}
        for n, a in self.coeffs.items():
            for k, b in other.coeffs.items():
                p = a * b if exact_mode else sc.to_complex(a) * sc.to_complex(b)
                out[n + k] = out[n + k] + p if n + k in out else p
        return TrigPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> TrigPoly:
        if self.is_exact and sc.is_exact_scalar(c):
            c = sc.exact(c)
            return TrigPoly({n: a * c for n, a in self.coeffs.items()})
        c = sc.to_complex(c)
        return TrigPoly({n: sc.to_complex(a) * c for n, a in self.coeffs.items()})

    def conj(self) -> TrigPoly:
        """Pointwise complex conjugate: coefficients conj(phi_{-n})."""
        return TrigPoly({-n: sc.conj_scalar(c) for n, c in self.coeffs.items()})

    def derivative(self, j: int = 1) -> TrigPoly:
        """(1/(2 pi i) d/dtheta)^j: multiplies phi_n by n**j."""
        return TrigPoly({n: c * (n**j) for n, c in self.coeffs.items()})

    def plus_part(self) -> TrigPoly:
        return TrigPoly({n: c for n, c in self.coeffs.items() if n >= 0})

    def minus_part(self) -> TrigPoly:
        return TrigPoly({n: c for n, c in self.coeffs.items() if n < 0})

    def shift(self, k: int) -> TrigPoly:
        """Multiply by exp(2 pi i k theta)."""
        return TrigPoly({n + k: c for n, c in self.coeffs.items()})

    def is_real(self, tol: float = 0.0) -> bool:
        return self.close(self.conj(), tol)

    # evaluation and norms ---------------------------------------------------

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for n, c in self.coeffs.items():
            out += sc.to_complex(c) * np.exp(2j * np.pi * n * theta)
        return out

    def l1_norm(self) -> float:
        return float(sum(abs(sc.to_complex(c)) for c in self.coeffs.values()))

    def sup_norm(self, rtol: float = SUP_RTOL) -> NormValue:
        if not self.coeffs:
            return NormValue.exact(0.0)
        freqs = np.array(list(self.coeffs))
        vals = np.array([sc.to_complex(c) for c in self.coeffs.values()])
        lo, hi = sup_interval_from_coeffs(freqs, vals, rtol)
        return NormValue.interval(lo, hi)

    def min_abs(self, rtol: float = SUP_RTOL) -> tuple[float, float]:
        """Sampled minimum of |phi| and a certified lower bound for it."""
        if not self.coeffs:
            return 0.0, 0.0
        W = max(self.coeffs) - min(self.coeffs)
        deriv_bound = 2 * math.pi * self.derivative(1).l1_norm()
        M = 16 * (W + 1)
        while True:
            vals = np.abs(self(np.arange(M) / M))
            sampled = float(vals.min())
            certified = sampled - deriv_bound / (2 * M)
            if certified > 0 and (sampled - certified) <= max(rtol, 0.25) * sampled or M >= _GRID_CAP:
                return sampled, certified
            M *= 4

    def ck_norm(self, k: int) -> NormValue:
        """sum_j binom(k, j) sup |(1/(2 pi i) d/dtheta)^j phi|."""
        total = NormValue.exact(0.0)
        for j in range(k + 1):
            total = total + comb(k, j) * self.derivative(j).sup_norm()
        return _tighten(total)

    # comparison and serialization ------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        if self.is_exact and other.is_exact:
            return all(self.coeffs[n] == other.coeffs[n] for n in self.coeffs)
        return self.close(other, 0.0)

    __hash__ = None

    def close(self, other: TrigPoly, tol: float = 1e-9) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(sc.to_complex(self.coefficient(n)) - sc.to_complex(other.coefficient(n))) <= tol for n in keys)

    def max_diff(self, other: TrigPoly) -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(sc.to_complex(self.coefficient(n)) - sc.to_complex(other.coefficient(n))) for n in keys), default=0.0)

    def __repr__(self) -> str:
        return f"TrigPoly({self.coeffs})"

    def to_json(self) -> dict:
        return {"coeffs": [{"n": n, "c": sc.scalar_to_json(c)} for n, c in self.coeffs.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> TrigPoly:
        return cls({int(t["n"]): sc.scalar_from_json(t["c"]) for t in data.get("coeffs", [])})


def _tighten(v: NormValue) -> NormValue:
    # sums of exact terms that agree to round-off are reported as exact
    if v.upper - v.lower <= 1e-15 * max(v.upper, 1.0):
        return NormValue.exact(v.upper)
    return v


class LambdaSymbol:
    """Lambda(theta, x) = sum_n exp(2 pi i n theta) lambda_n(x) with x-only lambda_n."""

    __slots__ = ("s", "modes")

    def __init__(self, s: int, modes: Mapping[int, DiagonalSymbol] | None = None):
        self.s = s
        clean = {}
        for n, sym in (modes or {}).items():
            if sym.s != s:
                raise SymbolError(f"base mismatch: {sym.s} vs {s}")
            if sym.d:
                raise SymbolError(f"mode {n}: lambda_n must be m-independent")
            if not sym.is_zero():
                clean[int(n)] = sym
        self.modes = dict(sorted(clean.items()))

    @classmethod
    def from_trig(cls, s: int, phi: TrigPoly) -> LambdaSymbol:
        return cls(s, {n: DiagonalSymbol.constant(s, c) for n, c in phi.coeffs.items()})

    @property
    def support(self) -> list[int]:
        return list(self.modes)

    @property
    def e(self) -> int:
        return max((sym.e for sym in self.modes.values()), default=1)

    def is_zero(self) -> bool:
        return not self.modes

    def mode(self, n: int) -> DiagonalSymbol:
        return self.modes.get(n, DiagonalSymbol.zero(self.s))

    def _combine(self, other: LambdaSymbol, op) -> LambdaSymbol:
        out = dict(self.modes)
        for n, sym in other.modes.items():
            out[n] = op(out[n], sym) if n in out else op(DiagonalSymbol.zero(self.s), sym)
        return LambdaSymbol(self.s, out)

    def __add__(self, other: LambdaSymbol) -> LambdaSymbol:
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: LambdaSymbol) -> LambdaSymbol:
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> LambdaSymbol:
        return LambdaSymbol(self.s, {n: -sym for n, sym in self.modes.items()})

    def __mul__(self, other) -> LambdaSymbol:
        if isinstance(other, TrigPoly):
            other = LambdaSymbol.from_trig(self.s, other)
        if not isinstance(other, LambdaSymbol):
            return LambdaSymbol(self.s, {n: sym.scale(other) for n, sym in self.modes.items()})
        out: dict[int, DiagonalSymbol] = {}
        for n, a in self.modes.items():
            for k, b in other.modes.items():
                out[n + k] = out[n + k] + a * b if n + k in out else a * b
        return LambdaSymbol(self.s, out)

    __rmul__ = __mul__

    def conj(self) -> LambdaSymbol:
        return LambdaSymbol(self.s, {-n: sym.conj() for n, sym in self.modes.items()})

    def derivative(self, j: int = 1) -> LambdaSymbol:
        return LambdaSymbol(self.s, {n: sym.scale(n**j) for n, sym in self.modes.items()})

    def e1_average(self) -> TrigPoly:
        """Mode-wise Haar average over the unit part."""
        return TrigPoly({n: sym.e1_average() for n, sym in self.modes.items()})

    def theta_independent(self) -> bool:
        return all(n == 0 for n in self.modes)

    def x_independent(self) -> bool:
        return all(sym.e == 1 and sym.tail_is_constant() for sym in self.modes.values())

    def as_trig(self) -> TrigPoly:
        if not self.x_independent():
            raise SymbolError("Lambda depends on x")
        return TrigPoly({n: sym.tail[0] for n, sym in self.modes.items()})

    def coefficient_table(self, e: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(frequencies, complex array of shape (units, modes)) at residue depth e."""
        e = e or self.e
        freqs = np.array(self.support, dtype=int)
        if not self.modes:
            return freqs, np.zeros(((self.s - 1) * self.s ** (e - 1), 0), dtype=complex)
        cols = [sc.as_complex(sym.refined(e)[1]) for sym in self.modes.values()]
        return freqs, np.stack(cols, axis=1)

    def sup_norm(self, rtol: float = SUP_RTOL) -> NormValue:
        if not self.modes:
            return NormValue.exact(0.0)
        freqs, table = self.coefficient_table()
        lo, hi = sup_interval_from_coeffs(freqs, table, rtol)
        return NormValue.interval(lo, hi)

    def ck_norm(self, k: int) -> NormValue:
        total = NormValue.exact(0.0)
        for j in range(k + 1):
            total = total + comb(k, j) * self.derivative(j).sup_norm()
        return _tighten(total)

    def close(self, other: LambdaSymbol, tol: float = 1e-9) -> bool:
        return self.max_diff(other) <= tol

    def max_diff(self, other: LambdaSymbol) -> float:
        diff = self - other
        return max((sym.sup_norm() for sym in diff.modes.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaSymbol):
            return NotImplemented
        return self.s == other.s and self.modes.keys() == other.modes.keys() and all(
            self.modes[n] == other.modes[n] for n in self.modes
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"LambdaSymbol(s={self.s}, modes={self.modes})"

    def to_json(self) -> dict:
        return {"s": self.s, "modes": [{"n": n, "symbol": sym.to_json()} for n, sym in self.modes.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> LambdaSymbol:
        return cls(int(data["s"]), {int(t["n"]): DiagonalSymbol.from_json(t["symbol"]) for t in data.get("modes", [])})
