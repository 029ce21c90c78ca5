"""Derivations: the vector-field lift, generalised-Toeplitz commutators, inner
derivations, generator-image tables, Fourier components and the decomposition
delta = delta_phi + d_Lambda + [w, .].
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from . import scalars as sc
from .algebra import AlgebraError, Element, gen_toeplitz, toeplitz
from .intervals import NormValue, nv_max
from .norms import n_norm
from .sampling import cylinder_indicator_table
from .symbols import DiagonalSymbol, SymbolError
from .trig import LambdaSymbol, TrigPoly


class DerivationError(ValueError):
    pass


class ConsistencyError(DerivationError):
    pass


class Derivation:
    """Base class; subclasses implement :meth:`apply`."""

    s: int

    def apply(self, a: Element) -> Element:
        raise NotImplementedError

    def __call__(self, a: Element) -> Element:
        return self.apply(a)

    def __add__(self, other: Derivation) -> Derivation:
        return SumDerivation(self.s, [(1, self), (1, other)])

    def __sub__(self, other: Derivation) -> Derivation:
        return SumDerivation(self.s, [(1, self), (-1, other)])

    def scale(self, c) -> Derivation:
        return SumDerivation(self.s, [(c, self)])

    def component(self, n: int) -> FourierComponent:
        return FourierComponent(self, n)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass
class DPhi(Derivation):
    """Lift of the vector field phi (1/(2 pi i)) d/dtheta: a -> [T(phi_+) P + P T(phi_-), a]."""

    s: int
    phi: TrigPoly

    def apply(self, a: Element) -> Element:
        tp = toeplitz(self.s, self.phi.plus_part())
        tm = toeplitz(self.s, self.phi.minus_part())
        dp = a.delta_P()
        out = tp * dp + dp * tm
        c_plus, c_minus = tp.commutator(a), tm.commutator(a)
        # commutators with Toeplitz operators carry no tails, so the P-weights are representable
        if not c_plus.is_zero():
            out = out + c_plus.times_P()
        if not c_minus.is_zero():
            out = out + c_minus.P_times()
        return out

    def to_json(self) -> dict:
        return {"type": "dphi", "s": self.s, "phi": self.phi.to_json()}


@dataclass
class DLambda(Derivation):
    """a -> [GT(Lambda), a]."""

    lam: LambdaSymbol

    @property
    def s(self) -> int:
        return self.lam.s

    def apply(self, a: Element) -> Element:
        return gen_toeplitz(self.lam).commutator(a)

    def to_json(self) -> dict:
        return {"type": "dlambda", "lambda": self.lam.to_json()}


@dataclass
class Inner(Derivation):
    w: Element

    @property
    def s(self) -> int:
        return self.w.s

    def apply(self, a: Element) -> Element:
        return self.w.commutator(a)

    def to_json(self) -> dict:
        return {"type": "inner", "w": self.w.to_json()}


@dataclass
class SumDerivation(Derivation):
    s: int
    parts: list

    def apply(self, a: Element) -> Element:
        out = Element.zero(self.s)
        for c, d in self.parts:
            img = d.apply(a)
            out = out + (img if _is_one(c) else img.scale(c))
        return out

    def to_json(self) -> dict:
        return {
            "type": "sum",
            "s": self.s,
            "parts": [{"coeff": sc.scalar_to_json(c), "derivation": d.to_json()} for c, d in self.parts],
        }


def _is_one(c) -> bool:
    return isinstance(c, int) and c == 1


@dataclass
class FourierComponent(Derivation):
    """delta_n(a) = sum_k mode_{k+n}(delta(a_k)), a_k the k-th mode of a."""

    base: Derivation
    n: int

    @property
    def s(self) -> int:
        return self.base.s

    def apply(self, a: Element) -> Element:
        out = Element.zero(a.s)
        for k in a.terms:
            out = out + self.base.apply(a.mode(k)).mode(k + self.n)
        return out

    def to_json(self) -> dict:
        raise DerivationError("Fourier components are not serialised")


def fourier_component_of_derivation(delta: Derivation, n: int, a: Element) -> Element:
    return FourierComponent(delta, n).apply(a)


def fourier_component_by_averaging(delta: Derivation, n: int, a: Element, K: int) -> Element:
    """(1/K) sum_k exp(2 pi i n k/K) rho_{-k/K} delta rho_{k/K}(a), in float mode."""
    out = Element.zero(a.s)
    for k in range(K):
        theta = k / K
        img = delta.apply(a.to_float().rho(theta)).rho(-theta)
        out = out + img.scale(np.exp(2j * np.pi * n * theta) / K)
    return out


class GeneratorImages(Derivation):
    """A derivation specified by dV, dV* and dM on indicators of residues mod s**k.

    Applied by the Leibniz rule on the normal form.
    """

    def __init__(self, s: int, k: int, dV: Element, dVstar: Element, dM: Mapping[int, Element]):
        self.s, self.k = s, k
        self.dV, self.dVstar = dV, dVstar
        missing = [r for r in range(s**k) if r not in dM]
        if missing:
            raise DerivationError(f"dM table misses residues {missing[:5]}")
        self.dM = {int(r): dM[r] for r in range(s**k)}

    @classmethod
    def from_derivation(cls, delta: Derivation, s: int, k: int) -> GeneratorImages:
        table = cylinder_indicator_table(s, k)
        dM = {r: delta.apply(Element.multiplier(sym)) for r, sym in table.items()}
        return cls(s, k, delta.apply(Element.V(s)), delta.apply(Element.Vstar(s)), dM)

    def _delta_M(self, F: DiagonalSymbol) -> Element:
        try:
            depth = F.zs_depth()
        except SymbolError as exc:
            raise DerivationError("coefficient is not a function on Z_s") from exc
        if depth > self.k:
            raise DerivationError(f"dM table has depth {self.k}, coefficient needs {depth}")
        out = Element.zero(self.s)
        for r, v in enumerate(F.cylinder_values(self.k)):
            if v:
                out = out + self.dM[r].scale(v)
        return out

    def apply(self, a: Element) -> Element:
        s = self.s
        out = Element.zero(s)
        for n, F in a.terms.items():
            MF = Element.multiplier(F)
            dMF = self._delta_M(F)
            if n >= 0:
                acc = Element.V(s, n) * dMF
                for i in range(n):
                    acc = acc + Element.V(s, i) * self.dV * Element.V(s, n - 1 - i) * MF
            else:
                k = -n
                acc = dMF * Element.Vstar(s, k)
                for i in range(k):
                    acc = acc + MF * Element.Vstar(s, i) * self.dVstar * Element.Vstar(s, k - 1 - i)
            out = out + acc
        return out

    def consistency_defects(self) -> dict[str, float]:
        """Largest coefficient defect for each Leibniz consistency rule (0 when consistent)."""
        s, k = self.s, self.k
        V, Vs = Element.V(s), Element.Vstar(s)
        table = cylinder_indicator_table(s, k)
        P = {r: Element.multiplier(sym) for r, sym in table.items()}
        out = {"VstarV": (self.dVstar * V + Vs * self.dV).max_diff(Element.zero(s))}
        total = Element.zero(s)
        for img in self.dM.values():
            total = total + img
        out["unit"] = total.max_diff(Element.zero(s))
        idem, orth, inter = 0.0, 0.0, 0.0
        for r, p in P.items():
            d = self.dM[r]
            idem = max(idem, (p * d + d * p).max_diff(d))
            for r2, p2 in P.items():
                if r2 != r:
                    orth = max(orth, (p * self.dM[r2] + d * p2).max_diff(Element.zero(s)))
            beta_p = table[r].beta()
            d_beta = self._delta_M(beta_p)
            lhs = d * V + p * self.dV
            rhs = self.dV * Element.multiplier(beta_p) + V * d_beta
            inter = max(inter, lhs.max_diff(rhs))
            lhs2 = self.dVstar * p * V + Vs * d * V + Vs * p * self.dV
            inter = max(inter, lhs2.max_diff(d_beta))
        out.update({"idempotent": idem, "orthogonal": orth, "intertwining": inter})
        return out

    def validate(self, tol: float = 0.0):
        bad = {name: v for name, v in self.consistency_defects().items() if v > tol}
        if bad:
            raise ConsistencyError(f"generator images are inconsistent: {bad}")

    def to_json(self) -> dict:
        return {
            "type": "images",
            "s": self.s,
            "k": self.k,
            "dV": self.dV.to_json(),
            "dVstar": self.dVstar.to_json(),
            "dM": [{"r": r, "image": img.to_json()} for r, img in self.dM.items()],
        }


def derivation_from_json(data: Mapping) -> Derivation:
    kind = data.get("type")
    if kind == "dphi":
        return DPhi(int(data["s"]), TrigPoly.from_json(data["phi"]))
    if kind == "dlambda":
        return DLambda(LambdaSymbol.from_json(data["lambda"]))
    if kind == "inner":
        return Inner(Element.from_json(data["w"]))
    if kind == "sum":
        parts = [(sc.scalar_from_json(p.get("coeff", 1)), derivation_from_json(p["derivation"])) for p in data["parts"]]
        parts = [(1 if c == 1 else c, d) for c, d in parts]
        return SumDerivation(int(data["s"]), parts)
    if kind == "images":
        dM = {int(t["r"]): Element.from_json(t["image"]) for t in data["dM"]}
        return GeneratorImages(
            int(data["s"]), int(data["k"]), Element.from_json(data["dV"]), Element.from_json(data["dVstar"]), dM
        )
    raise DerivationError(f"unknown derivation type {kind!r}")


# covariant solution and decomposition -------------------------------------------------


def covariant_solve(n: int, G: DiagonalSymbol) -> tuple[DiagonalSymbol, DiagonalSymbol]:
    """Solve G = alpha(H) - H with H = R + r, R zero-tail and r x-only.

    H(k, u) = -sum_{j<=k} G(j, u), r(u) = -sum_j G(j, u).  The mode index n is
    accepted for symmetry with the mode bookkeeping; the recursion is the same
    for every n != 0.
    """
    if not G.tail_is_zero():
        raise DerivationError("covariant recursion diverges on a nonzero tail")
    s, e = G.s, G.e
    if G.d == 0:
        zero = DiagonalSymbol.zero(s, G.is_exact)
        return zero, zero
    H = -np.cumsum(G.core, axis=0)
    r = H[-1].copy()
    R = DiagonalSymbol(s, e, H - r[None, :], np.zeros_like(r) if r.dtype != object else sc.exact_zeros(r.shape))
    return R, DiagonalSymbol.x_only(s, e, list(r))


def invariant_solve(F0: DiagonalSymbol) -> DiagonalSymbol:
    """Zero-tail R with beta(R) - R = F0, i.e. R(m) = -sum_{j>=m} F0(j)."""
    if not F0.tail_is_zero():
        raise DerivationError("invariant recursion diverges on a nonzero tail")
    if F0.d == 0:
        return DiagonalSymbol.zero(F0.s, F0.is_exact)
    rev = np.cumsum(F0.core[::-1], axis=0)[::-1]
    zeros = sc.exact_zeros(F0.n_units) if F0.is_exact else np.zeros(F0.n_units, complex)
    return DiagonalSymbol(F0.s, F0.e, -rev, zeros)


@dataclass
class Decomposition:
    phi: TrigPoly
    lam: LambdaSymbol
    inner_generator: Element
    residual: NormValue

    def derivation(self) -> Derivation:
        s = self.lam.s
        return DPhi(s, self.phi) + DLambda(self.lam) + Inner(self.inner_generator)

    def to_json(self) -> dict:
        return {
            "phi": self.phi.to_json(),
            "lambda": self.lam.to_json(),
            "inner": self.inner_generator.to_json(),
            "residual": self.residual.upper,
        }


def is_inner_certificate(dec: Decomposition, tol: float = 0.0) -> bool:
    """True iff phi and Lambda vanish, so the derivation is [inner_generator, .]."""
    phi_zero = all(abs(sc.to_complex(c)) <= tol for c in dec.phi.coeffs.values())
    lam_zero = all(sym.sup_norm() <= tol for sym in dec.lam.modes.values())
    return phi_zero and lam_zero


def _generators(s: int, k: int) -> list[tuple[str, Element]]:
    gens = [("V", Element.V(s)), ("Vstar", Element.Vstar(s))]
    for r, sym in cylinder_indicator_table(s, k).items():
        gens.append((f"M[{r} mod {s}^{k}]", Element.multiplier(sym)))
    return gens


def residual_norm(delta: Derivation, other: Derivation, s: int, k: int, m_cut: int = 64) -> NormValue:
    """max over generators g of ||delta(g) - other(g)||."""
    return nv_max(n_norm(delta.apply(g) - other.apply(g), 0, m_cut) for _, g in _generators(s, k))


def decompose(delta: Derivation, tol: float = 1e-9, residual_depth: int | None = None) -> Decomposition:
    """Split delta into DPhi(phi) + DLambda(Lambda) + Inner(w) with normalised Lambda."""
    s = delta.s
    if isinstance(delta, GeneratorImages):
        delta.validate(tol if not delta.dV.is_exact else 0.0)
    V, Vs = Element.V(s), Element.Vstar(s)
    dV = delta.apply(V)
    if not dV.in_HS():
        raise DerivationError("delta(V) has an x-dependent tail; not a derivation into HS")
    phi = dV.quotient_q().shift(-1)
    rest = delta - DPhi(s, phi)
    rV, rVs = rest.apply(V), rest.apply(Vs)
    for name, img in (("V", rV), ("Vstar", rVs)):
        if not img.in_Is():
            raise DerivationError(f"remainder maps {name} outside the ideal")

    R_terms: dict[int, DiagonalSymbol] = {}
    lam_raw: dict[int, DiagonalSymbol] = {}
    for j in rVs.terms:  # delta'_n(V*) lives in mode n - 1
        n = j + 1
        if n >= 1:
            R_terms[n], lam_raw[n] = covariant_solve(n, rVs.fourier_component(j))
    for j in rV.terms:  # delta'_n(V) lives in mode n + 1
        n = j - 1
        if n <= -1:
            R_terms[n], lam_raw[n] = covariant_solve(n, -rV.fourier_component(j))
    R_terms[0] = invariant_solve(rV.fourier_component(1))

    raw = LambdaSymbol(s, lam_raw)
    psi0 = raw.e1_average()
    lam = raw - LambdaSymbol.from_trig(s, psi0)
    b = Element(s, R_terms)
    inner = toeplitz(s, psi0) + b
    k = residual_depth or max(2, lam.e, inner.max_e)
    if isinstance(delta, GeneratorImages):
        k = delta.k
    dec = Decomposition(phi, lam, inner, NormValue.exact(0.0))
    dec.residual = residual_norm(delta, dec.derivation(), s, k)
    return dec


__all__ = [
    "ConsistencyError",
    "DLambda",
    "DPhi",
    "Decomposition",
    "Derivation",
    "DerivationError",
    "FourierComponent",
    "GeneratorImages",
    "Inner",
    "SumDerivation",
    "covariant_solve",
    "decompose",
    "derivation_from_json",
    "fourier_component_by_averaging",
    "fourier_component_of_derivation",
    "invariant_solve",
    "is_inner_certificate",
    "residual_norm",
]
