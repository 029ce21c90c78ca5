"""Normal-form elements of the extended Hensel-Steinitz algebra.

An :class:`Element` is a finite sum

    sum_{n >= 0} V^n M_{F_n} + sum_{n < 0} M_{F_n} (V*)^{-n}

with diagonal-symbol coefficients F_n.  The model space is the orbit space
l^2(Z minus {0}), which splits into one copy of l^2(Z_{>=0}) per unit residue;
V is the unilateral shift on each copy and M_F acts diagonally.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from fractions import Fraction

import numpy as np

from . import scalars as sc
from .symbols import DiagonalSymbol, SymbolError
from .trig import LambdaSymbol, TrigPoly


class AlgebraError(ValueError):
    pass


class NotContractiveError(AlgebraError):
    pass


def _term_product(n: int, F: DiagonalSymbol, k: int, G: DiagonalSymbol) -> tuple[int, DiagonalSymbol]:
    """Product of the normal-form monomials of modes n and k; lands in mode n + k."""
    if n >= 0 and k >= 0:
        return n + k, F.beta(k) * G
    if n < 0 and k < 0:
        return n + k, F * G.beta(-n)
    if n >= 0:  # k < 0
        return n + k, (F * G).alpha(min(n, -k))
    if k >= -n:  # n < 0 <= k
        return n + k, F.beta(k + n) * G
    return n + k, F * G.beta(-n - k)


def _quarter_phase(x: Fraction):
    """exp(2 pi i x) as an exact Gaussian integer when 4x is an integer."""
    r = (x * 4) % 4
    if r.denominator != 1:
        return None
    return [sc.exact(1), sc.exact((0, 1)), sc.exact(-1), sc.exact((0, -1))][int(r)]


class Element:
    __slots__ = ("s", "terms")

    def __init__(self, s: int, terms: Mapping[int, DiagonalSymbol] | None = None):
        self.s = s
        clean = {}
        for n, sym in (terms or {}).items():
            if sym.s != s:
                raise AlgebraError(f"base mismatch: symbol base {sym.s} in element of base {s}")
            if not sym.is_zero():
                clean[int(n)] = sym
        self.terms = dict(sorted(clean.items()))

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, s: int) -> Element:
        return cls(s)

    @classmethod
    def scalar(cls, s: int, c=1) -> Element:
        return cls(s, {0: DiagonalSymbol.constant(s, c)})

    @classmethod
    def identity(cls, s: int) -> Element:
        return cls.scalar(s, 1)

    @classmethod
    def V(cls, s: int, power: int = 1) -> Element:
        """V**power for power >= 0, (V*)**(-power) otherwise."""
        return cls(s, {power: DiagonalSymbol.constant(s, 1)})

    @classmethod
    def Vstar(cls, s: int, power: int = 1) -> Element:
        return cls.V(s, -power)

    @classmethod
    def multiplier(cls, sym: DiagonalSymbol) -> Element:
        return cls(sym.s, {0: sym})

    @classmethod
    def monomial(cls, n: int, sym: DiagonalSymbol) -> Element:
        """V^n M_F (n >= 0) or M_F (V*)^{-n} (n < 0)."""
        return cls(sym.s, {n: sym})

    # basic properties --------------------------------------------------------

    @property
    def support(self) -> list[int]:
        return list(self.terms)

    @property
    def radius(self) -> int:
        return max((abs(n) for n in self.terms), default=0)

    @property
    def is_exact(self) -> bool:
        return all(sym.is_exact for sym in self.terms.values())

    @property
    def max_e(self) -> int:
        return max((sym.e for sym in self.terms.values()), default=1)

    @property
    def max_d(self) -> int:
        return max((sym.d for sym in self.terms.values()), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def to_float(self) -> Element:
        return Element(self.s, {n: sym.to_float() for n, sym in self.terms.items()})

    def fourier_component(self, n: int) -> DiagonalSymbol:
        return self.terms.get(n, DiagonalSymbol.zero(self.s, self.is_exact))

    def mode(self, n: int) -> Element:
        """The single-mode part of this element as an element."""
        return Element(self.s, {n: self.terms[n]} if n in self.terms else {})

    def in_HS(self) -> bool:
        return all(sym.tail_is_constant() for sym in self.terms.values())

    def in_Is(self) -> bool:
        return all(sym.tail_is_zero() for sym in self.terms.values())

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.s != self.s:
                raise AlgebraError(f"base mismatch: {self.s} vs {other.s}")
            return other
        return Element.scalar(self.s, other)

    # linear structure --------------------------------------------------------

    def __add__(self, other) -> Element:
        other = self._coerce(other)
        out = dict(self.terms)
        for n, sym in other.terms.items():
            out[n] = out[n] + sym if n in out else sym
        return Element(self.s, out)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element(self.s, {n: -sym for n, sym in self.terms.items()})

    def __sub__(self, other) -> Element:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Element:
        return self._coerce(other) - self

    def scale(self, c) -> Element:
        return Element(self.s, {n: sym.scale(c) for n, sym in self.terms.items()})

    # products ------------------------------------------------------------------

    def __mul__(self, other) -> Element:
        if not isinstance(other, Element):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[int, DiagonalSymbol] = {}
        for n, F in self.terms.items():
            for k, G in other.terms.items():
                mode, sym = _term_product(n, F, k, G)
                out[mode] = out[mode] + sym if mode in out else sym
        return Element(self.s, out)

    def __rmul__(self, c) -> Element:
        return self.scale(c)

    def __pow__(self, k: int) -> Element:
        if k < 0:
            raise AlgebraError("negative powers are not defined")
        out = Element.identity(self.s)
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other: Element) -> Element:
        return self * other - other * self

    def adjoint(self) -> Element:
        return Element(self.s, {-n: sym.conj() for n, sym in self.terms.items()})

    # gauge structure ------------------------------------------------------------

    def delta_P(self, j: int = 1) -> Element:
        """j-fold commutator with P: multiplies mode n by n**j."""
        return Element(self.s, {n: sym.scale(n**j) for n, sym in self.terms.items() if n != 0 or j == 0})

    def rho(self, theta) -> Element:
        """Circle action: mode n gets the phase exp(2 pi i n theta).

        Exact for rational theta whose phases are fourth roots of unity on an
        exact element; otherwise the result is in float mode.
        """
        exact_theta = isinstance(theta, (int, Fraction)) and not isinstance(theta, bool)
        out = {}
        for n, sym in self.terms.items():
            phase = _quarter_phase(Fraction(theta) * n) if exact_theta and sym.is_exact else None
            if phase is None:
                t = float(theta) * n
                phase = complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
            out[n] = sym.scale(phase)
        return Element(self.s, out)

    def expectation(self) -> Element:
        return self.mode(0)

    def quotient_q(self) -> TrigPoly:
        if not self.in_HS():
            raise AlgebraError("quotient map needs every tail to be x-independent")
        return TrigPoly({n: sym.tail[0] for n, sym in self.terms.items()})

    def sigma(self) -> LambdaSymbol:
        return LambdaSymbol(self.s, {n: sym.tail_symbol() for n, sym in self.terms.items()})

    def ideal_part(self) -> Element:
        """a - T(q(a)) for an HS element; zero-tail by construction."""
        return self - toeplitz(self.s, self.quotient_q())

    def symbolic_part(self) -> Element:
        """a - GT(sigma(a)): removes every tail, leaving an ideal element."""
        return self - gen_toeplitz(self.sigma())

    # diagonal weights ---------------------------------------------------------

    def right_weight(self, w: Callable[[np.ndarray], np.ndarray]) -> Element:
        """a * D_w with D_w E_{s^m u} = w(m) E_{s^m u}; needs zero tails."""
        self._require_ideal("right weighting")
        return Element(self.s, {n: sym.weighted(lambda m, k=max(0, -n): w(m + k)) for n, sym in self.terms.items()})

    def left_weight(self, w: Callable[[np.ndarray], np.ndarray]) -> Element:
        """D_w * a; needs zero tails."""
        self._require_ideal("left weighting")
        return Element(self.s, {n: sym.weighted(lambda m, k=max(0, n): w(m + k)) for n, sym in self.terms.items()})

    def _require_ideal(self, what: str):
        if not self.in_Is():
            raise AlgebraError(f"{what} is only representable on zero-tail elements")

    def times_one_plus_P(self, j: int) -> Element:
        return self.right_weight(lambda m: (1 + m) ** j)

    def one_plus_P_times(self, j: int) -> Element:
        return self.left_weight(lambda m: (1 + m) ** j)

    def times_P(self) -> Element:
        return self.right_weight(lambda m: m)

    def P_times(self) -> Element:
        return self.left_weight(lambda m: m)

    def partial_j(self, j: int) -> Element:
        """[(I+P)^j, a] on zero-tail modes; mode 0 commutes with P and drops out."""
        if j < 1:
            raise AlgebraError("partial_j needs j >= 1")
        rest = Element(self.s, {n: sym for n, sym in self.terms.items() if n != 0})
        return rest.one_plus_P_times(j) - rest.times_one_plus_P(j)

    # comparison and serialization ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.s == other.s and self.terms.keys() == other.terms.keys() and all(
            self.terms[n] == other.terms[n] for n in self.terms
        )

    __hash__ = None

    def max_diff(self, other: Element) -> float:
        """Largest coefficient discrepancy sup_{n,m,u} |F_n - G_n|."""
        diff = self - other
        return max((sym.sup_norm() for sym in diff.terms.values()), default=0.0)

    def close(self, other: Element, tol: float = 1e-9) -> bool:
        return self.max_diff(other) <= tol

    def __repr__(self) -> str:
        return f"Element(s={self.s}, terms={self.terms})"

    def to_json(self) -> dict:
        return {"s": self.s, "terms": [{"n": n, "symbol": sym.to_json()} for n, sym in self.terms.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> Element:
        s = int(data["s"])
        terms: dict[int, DiagonalSymbol] = {}
        for t in data.get("terms", []):
            n = int(t["n"])
            sym = DiagonalSymbol.from_json(t["symbol"])
            terms[n] = terms[n] + sym if n in terms else sym
        return cls(s, terms)


# free-function views ---------------------------------------------------------


def mul(a: Element, b: Element) -> Element:
    return a * b


def adjoint(a: Element) -> Element:
    return a.adjoint()


def delta_P(a: Element, j: int = 1) -> Element:
    return a.delta_P(j)


def partial_j(a: Element, j: int) -> Element:
    return a.partial_j(j)


def rho(a: Element, theta) -> Element:
    return a.rho(theta)


def expectation(a: Element) -> Element:
    return a.expectation()


def fourier_component(a: Element, n: int) -> DiagonalSymbol:
    return a.fourier_component(n)


def quotient_q(a: Element) -> TrigPoly:
    return a.quotient_q()


def sigma(a: Element) -> LambdaSymbol:
    return a.sigma()


def toeplitz(s: int, phi: TrigPoly) -> Element:
    return Element(s, {n: DiagonalSymbol.constant(s, c) for n, c in phi.coeffs.items()})


def gen_toeplitz(lam: LambdaSymbol) -> Element:
    return Element(lam.s, dict(lam.modes))


def matrix_unit(s: int, i: int, j: int, value=1) -> Element:
    """P_ij: sends E_{s^j u} to E_{s^i u} in every fiber."""
    if i < 0 or j < 0:
        raise AlgebraError("matrix unit indices must be nonnegative")
    if i >= j:
        return Element(s, {i - j: DiagonalSymbol.indicator(s, j, value)})
    return Element(s, {i - j: DiagonalSymbol.indicator(s, i, value)})


def proj_below(s: int, k: int) -> Element:
    if k < 1:
        raise AlgebraError("proj_below needs k >= 1")
    return Element.multiplier(DiagonalSymbol.proj_below(s, k))


# analytic constructions --------------------------------------------------------


def exp_order(x: float, tol: float) -> int:
    """Smallest K with x^(K+1)/(K+1)! / (1 - x/(K+2)) <= tol."""
    K = 0
    term = x  # x^(K+1)/(K+1)!
    while True:
        if K + 2 > x and term / (1 - x / (K + 2)) <= tol:
            return K
        K += 1
        term *= x / (K + 1)


def neumann_order(x: float, tol: float) -> int:
    """Smallest K with x^(K+1)/(1-x) <= tol."""
    if x == 0:
        return 0
    K = 0
    while x ** (K + 1) / (1 - x) > tol:
        K += 1
    return K


def exp_i(a: Element, tol: float = 1e-12) -> Element:
    """Truncated power series of exp(i a) in float mode.

    The order is chosen from a certified upper bound on the operator norm of a,
    so the omitted tail has norm at most ``tol``.
    """
    from .norms import n_norm

    a = a.to_float()
    x = n_norm(a, 0).upper
    if math.isinf(x):
        raise AlgebraError("operator norm bound unavailable")
    K = exp_order(x, tol)
    term = Element.identity(a.s).to_float()
    total = term
    for k in range(1, K + 1):
        term = (term * a).scale(1j / k)
        total = total + term
    return total


def neumann_inverse_defect(c: Element, tol: float = 1e-12) -> Element:
    """(I + c)^{-1} - I as the truncated series sum_{k>=1} (-c)^k.

    Requires a zero-tail ``c`` with certified norm below 1; the result is again
    zero-tail and the omitted tail has norm at most ``tol``.
    """
    from .norms import n_norm

    if not c.in_Is():
        raise AlgebraError("Neumann defect is defined for zero-tail elements")
    c = c.to_float()
    x = n_norm(c, 0).upper
    if x >= 1:
        raise NotContractiveError(f"norm bound {x:.6g} is not below 1")
    K = neumann_order(x, tol)
    term = Element.identity(c.s).to_float()
    total = Element.zero(c.s)
    for _ in range(K):
        term = -(term * c)
        total = total + term
    return total


# relation suite ---------------------------------------------------------------------

RELATION_NAMES = (
    "VstarV_eq_I",
    "V_Mf_Vstar_eq_M_alpha_f",
    "Vstar_Mf_V_eq_M_beta_f",
    "Mf_V_eq_V_M_beta_f",
    "VVstar_eq_M_alpha_1",
    "transfer_beta_alpha_f_g",
    "alpha_beta_f_eq_alpha_1_f",
)


def relation_checks(f: DiagonalSymbol, g: DiagonalSymbol) -> dict[str, bool]:
    """The seven crossed-product identities evaluated exactly on (f, g)."""
    s = f.s
    V, Vs, I = Element.V(s), Element.Vstar(s), Element.identity(s)
    Mf = Element.multiplier(f)
    one = DiagonalSymbol.constant(s, 1)
    return {
        "VstarV_eq_I": Vs * V == I,
        "V_Mf_Vstar_eq_M_alpha_f": V * Mf * Vs == Element.multiplier(f.alpha()),
        "Vstar_Mf_V_eq_M_beta_f": Vs * Mf * V == Element.multiplier(f.beta()),
        "Mf_V_eq_V_M_beta_f": Mf * V == V * Element.multiplier(f.beta()),
        "VVstar_eq_M_alpha_1": V * Vs == Element.multiplier(one.alpha()),
        "transfer_beta_alpha_f_g": (f.alpha() * g).beta() == f * g.beta(),
        "alpha_beta_f_eq_alpha_1_f": f.beta().alpha() == one.alpha() * f,
    }


def verify_crossed_product_relations(seed: int, count: int, s_values=(2, 3, 10), max_depth: int = 3) -> dict:
    """Check the seven identities on ``count`` seeded random pairs per base."""
    from .sampling import make_rng, random_cylinder_symbol

    rng = make_rng(seed)
    failures = {name: 0 for name in RELATION_NAMES}
    for s in s_values:
        for _ in range(count):
            f = random_cylinder_symbol(rng, s, int(rng.integers(0, max_depth + 1)))
            g = random_cylinder_symbol(rng, s, int(rng.integers(0, max_depth + 1)))
            for name, ok in relation_checks(f, g).items():
                failures[name] += not ok
    rows = [
        {
            "identity": name,
            "instances": count * len(s_values),
            "failures": failures[name],
            "status": "pass" if failures[name] == 0 else "fail",
        }
        for name in RELATION_NAMES
    ]
    return {
        "seed": seed,
        "count": count,
        "s_values": list(s_values),
        "identities": rows,
        "all_pass": all(r["status"] == "pass" for r in rows),
    }


__all__ = [
    "AlgebraError",
    "Element",
    "NotContractiveError",
    "RELATION_NAMES",
    "SymbolError",
    "adjoint",
    "delta_P",
    "exp_i",
    "expectation",
    "fourier_component",
    "gen_toeplitz",
    "matrix_unit",
    "mul",
    "neumann_inverse_defect",
    "partial_j",
    "proj_below",
    "quotient_q",
    "relation_checks",
    "rho",
    "sigma",
    "toeplitz",
    "verify_crossed_product_relations",
]
