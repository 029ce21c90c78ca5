"""Seeded certification of the norm estimates.

Each check draws its own random instances from a generator keyed by
``(seed, check index)``, so checks can be run individually or reordered
without changing their instances.  An instance yields (relation, lhs, rhs)
triples of :class:`NormValue`; ``le`` triples are certified when
upper(lhs) <= lower(rhs) and ``eq`` triples when both values agree to
round-off.  Instances whose verdict depends on a truncation size are retried
with a doubled ``m_cut`` up to ``m_cut_cap``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .algebra import Element, exp_i, gen_toeplitz, toeplitz
from .intervals import NormValue, certify_eq, certify_le, nv_sum
from .norms import hs_norm, mn_norm, n_norm
from .sampling import random_element, random_lambda, random_self_adjoint, random_sparse_trig, random_trig
from .symbols import DiagonalSymbol
from .trig import TrigPoly

TOEPLITZ_CONSTANT = math.pi**2 / 3 - 1

Triple = tuple[str, NormValue, NormValue]
Instance = Callable[[int], list[Triple]]


@dataclass
class InequalityConfig:
    s: int = 2
    count: int = 100
    toeplitz_count: int = 50
    exp_count: int = 50
    support: int = 2
    depth_d: int = 3
    depth_e: int = 2
    degree: int = 4
    M_max: int = 2
    N_max: int = 2
    binomial_max: int = 5
    exp_M_max: int = 3
    constant: float = TOEPLITZ_CONSTANT
    m_cut: int = 64
    m_cut_cap: int = 1024
    exp_tol: float = 1e-15
    S: float = 4.0
    checks: list[str] | None = field(default=None)


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, index]))


def _ideal(cfg: InequalityConfig, rng) -> Element:
    return random_element(rng, cfg.s, cfg.support, cfg.depth_d, cfg.depth_e, "zero", exact=False)


def _self_adjoint(cfg: InequalityConfig, rng) -> Element:
    return random_self_adjoint(rng, cfg.s, cfg.support, cfg.depth_d, cfg.depth_e, exact=False)


def _mn_grid(cfg: InequalityConfig):
    return [(M, N) for M in range(cfg.M_max + 1) for N in range(cfg.N_max + 1)]


def exp_i_trig_derivatives(phi: TrigPoly, M: int) -> list[TrigPoly]:
    """g_j with D^j exp(i phi) = g_j exp(i phi), D = (1/(2 pi i)) d/dtheta, for j <= M."""
    dphi = phi.derivative(1)
    g = [TrigPoly.constant(1)]
    for _ in range(M):
        g.append(g[-1].derivative(1) + (dphi * g[-1]).scale(1j))
    return g


def ck_norm_exp_i(phi: TrigPoly, M: int) -> NormValue:
    """C^M norm of exp(i phi) for real phi, via |exp(i phi)| = 1."""
    g = exp_i_trig_derivatives(phi, M)
    return nv_sum(comb(M, j) * g[j].sup_norm() for j in range(M + 1))


# individual checks --------------------------------------------------------------


def check_nprop_monotone(cfg, rng) -> list[Instance]:
    def make(a):
        return lambda m_cut: [("le", n_norm(a, N, m_cut), n_norm(a, N + 1, m_cut)) for N in range(cfg.N_max + 1)]

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def check_nprop_submultiplicative(cfg, rng) -> list[Instance]:
    def make(a, b):
        def run(m_cut):
            out = []
            a0 = n_norm(a, 0, m_cut)
            for N in range(cfg.N_max + 1):
                bN = n_norm(b, N, m_cut)
                out.append(("le", n_norm(a * b, N, m_cut), a0 * bN))
                out.append(("le", a0 * bN, n_norm(a, N, m_cut) * bN))
            return out

        return run

    return [make(_ideal(cfg, rng), _ideal(cfg, rng)) for _ in range(cfg.count)]


def check_nprop_adjoint(cfg, rng) -> list[Instance]:
    def make(a):
        def run(m_cut):
            out = []
            for N in range(cfg.N_max + 1):
                rhs = nv_sum(comb(N, j) * n_norm(a.delta_P(j), N, m_cut) for j in range(N + 1))
                out.append(("le", n_norm(a.adjoint(), N, m_cut), rhs))
            return out

        return run

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def check_mnprop_recursion(cfg, rng) -> list[Instance]:
    def make(a):
        return lambda m_cut: [
            ("eq", mn_norm(a, M + 1, N, m_cut), mn_norm(a, M, N, m_cut) + mn_norm(a.delta_P(), M, N, m_cut))
            for M, N in _mn_grid(cfg)
        ]

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def check_mnprop_monotone(cfg, rng) -> list[Instance]:
    def make(a):
        return lambda m_cut: [("le", mn_norm(a, M, N, m_cut), mn_norm(a, M, N + 1, m_cut)) for M, N in _mn_grid(cfg)]

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def check_mnprop_submultiplicative(cfg, rng) -> list[Instance]:
    def make(a, b):
        def run(m_cut):
            out = []
            for M, N in _mn_grid(cfg):
                bMN = mn_norm(b, M, N, m_cut)
                mid = mn_norm(a, M, 0, m_cut) * bMN
                out.append(("le", mn_norm(a * b, M, N, m_cut), mid))
                out.append(("le", mid, mn_norm(a, M, N, m_cut) * bMN))
            return out

        return run

    return [make(_ideal(cfg, rng), _ideal(cfg, rng)) for _ in range(cfg.count)]


def check_mnprop_delta(cfg, rng) -> list[Instance]:
    def make(a):
        return lambda m_cut: [
            ("le", mn_norm(a.delta_P(), M, N, m_cut), mn_norm(a, M + 1, N, m_cut)) for M, N in _mn_grid(cfg)
        ]

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def check_mnprop_adjoint(cfg, rng) -> list[Instance]:
    def make(a):
        return lambda m_cut: [
            ("le", mn_norm(a.adjoint(), M, N, m_cut), mn_norm(a, M + N, N, m_cut)) for M, N in _mn_grid(cfg)
        ]

    return [make(_ideal(cfg, rng)) for _ in range(cfg.count)]


def _identity_triples(lhs: Element, rhs: Element, N_max: int, m_cut: int) -> list[Triple]:
    out: list[Triple] = [("eq", NormValue.exact(0.0 if lhs == rhs else 1.0), NormValue.exact(0.0))]
    for N in range(N_max + 1):
        out.append(("eq", n_norm(lhs, N, m_cut), n_norm(rhs, N, m_cut)))
        out.append(("eq", n_norm(lhs - rhs, N, m_cut), NormValue.exact(0.0)))
    return out


def check_partial_binomial(cfg, rng) -> list[Instance]:
    """[(I+P)^j, a] = sum_{k=1}^j binom(j,k) delta_P^k(a) (I+P)^{j-k}."""

    def make(a):
        def run(m_cut):
            out = []
            for j in range(1, cfg.binomial_max + 1):
                rhs = Element.zero(a.s)
                for k in range(1, j + 1):
                    rhs = rhs + a.delta_P(k).times_one_plus_P(j - k).scale(comb(j, k))
                out += _identity_triples(a.partial_j(j), rhs, cfg.N_max, m_cut)
            return out

        return run

    return [make(random_element(rng, cfg.s, cfg.support, cfg.depth_d, cfg.depth_e)) for _ in range(cfg.count)]


def check_binomial_inverse(cfg, rng) -> list[Instance]:
    """delta_P^j(a) = sum_{k=1}^j (-1)^{j-k} binom(j,k) [(I+P)^k, a] (I+P)^{j-k}."""

    def make(a):
        def run(m_cut):
            out = []
            for j in range(1, cfg.binomial_max + 1):
                rhs = Element.zero(a.s)
                for k in range(1, j + 1):
                    rhs = rhs + a.partial_j(k).times_one_plus_P(j - k).scale((-1) ** (j - k) * comb(j, k))
                out += _identity_triples(a.delta_P(j), rhs, cfg.N_max, m_cut)
            return out

        return run

    return [make(random_element(rng, cfg.s, cfg.support, cfg.depth_d, cfg.depth_e)) for _ in range(cfg.count)]


def check_expectation_contractive(cfg, rng) -> list[Instance]:
    """||E(a)|| <= ||a|| on ideal elements and on elements with constant tails."""

    def make(a):
        return lambda m_cut: [("le", n_norm(a.expectation(), 0, m_cut), n_norm(a, 0, m_cut))]

    out = []
    for i in range(cfg.count):
        tail = "zero" if i % 2 == 0 else "const"
        out.append(make(random_element(rng, cfg.s, cfg.support, cfg.depth_d, cfg.depth_e, tail, exact=False)))
    return out


def toeplitz_defect(s: int, phi: TrigPoly, psi: TrigPoly) -> Element:
    return toeplitz(s, phi) * toeplitz(s, psi) - toeplitz(s, phi * psi)


def toeplitz_defect_formula(s: int, phi: TrigPoly, psi: TrigPoly) -> Element:
    """-sum_{n<0} psi_n (V*)^{-n} T(phi_+) P_{<-n}."""
    from .algebra import proj_below

    tp = toeplitz(s, phi.plus_part())
    out = Element.zero(s)
    for n, c in psi.coeffs.items():
        if n < 0:
            out = out - (Element.V(s, n) * tp * proj_below(s, -n)).scale(c)
    return out


def check_toeplitz_identity(cfg, rng) -> list[Instance]:
    def make(phi, psi):
        def run(m_cut):
            ok = toeplitz_defect(cfg.s, phi, psi) == toeplitz_defect_formula(cfg.s, phi, psi)
            return [("eq", NormValue.exact(0.0 if ok else 1.0), NormValue.exact(0.0))]

        return run

    return [make(random_trig(rng, 5), random_trig(rng, 5)) for _ in range(cfg.toeplitz_count)]


def check_toeplitz_bound(cfg, rng) -> list[Instance]:
    def make(phi, psi):
        def run(m_cut):
            D = toeplitz_defect(cfg.s, phi, psi)
            return [
                ("le", mn_norm(D, M, N, m_cut), cfg.constant * psi.ck_norm(M + N + 2) * phi.ck_norm(M))
                for M, N in _mn_grid(cfg)
            ]

        return run

    # sparse pairs (a few modes each) sit close to the extremal ratio; dense ones exercise the rest
    out = []
    for i in range(cfg.toeplitz_count):
        draw = random_sparse_trig if i % 2 == 0 else random_trig
        out.append(make(draw(rng, cfg.degree, exact=False), draw(rng, cfg.degree, exact=False)))
    return out


def check_toeplitz_ideal_products(cfg, rng) -> list[Instance]:
    """||T(phi) c||_{M,N} <= ||phi||_{C^M} ||c||_{M,N}; ||c T(phi)||_{M,N} <= ||phi||_{C^{M+N}} ||c||_{M,N}."""

    def make(phi, c):
        def run(m_cut):
            T = toeplitz(cfg.s, phi)
            out = []
            for M, N in _mn_grid(cfg):
                cMN = mn_norm(c, M, N, m_cut)
                out.append(("le", mn_norm(T * c, M, N, m_cut), phi.ck_norm(M) * cMN))
                out.append(("le", mn_norm(c * T, M, N, m_cut), phi.ck_norm(M + N) * cMN))
            return out

        return run

    return [make(random_trig(rng, cfg.degree, exact=False), _ideal(cfg, rng)) for _ in range(cfg.toeplitz_count)]


def check_generalized_toeplitz(cfg, rng) -> list[Instance]:
    """Generalised-Toeplitz analogues of the two estimates above, with x-dependent Lambda."""

    def make(lam, om, c):
        def run(m_cut):
            TL, TO = gen_toeplitz(lam), gen_toeplitz(om)
            D = TL * TO - gen_toeplitz(lam * om)
            out = []
            for M, N in _mn_grid(cfg):
                cMN = mn_norm(c, M, N, m_cut)
                out.append(("le", mn_norm(TL * c, M, N, m_cut), lam.ck_norm(M) * cMN))
                out.append(("le", mn_norm(c * TL, M, N, m_cut), lam.ck_norm(M + N) * cMN))
                out.append(("le", mn_norm(D, M, N, m_cut), cfg.constant * om.ck_norm(M + N + 2) * lam.ck_norm(M)))
            return out

        return run

    out = []
    for _ in range(cfg.toeplitz_count):
        lam = random_lambda(rng, cfg.s, cfg.depth_e, 3, cfg.degree, exact=False, normalized=False)
        om = random_lambda(rng, cfg.s, cfg.depth_e, 3, cfg.degree, exact=False, normalized=False)
        out.append(make(lam, om, _ideal(cfg, rng)))
    return out


def check_exp_minus_identity(cfg, rng) -> list[Instance]:
    """||e^{ia} - I||_{0,N} <= ||a||_{0,N} and the partial_j companion estimate."""

    def make(a):
        def run(m_cut):
            E = exp_i(a, cfg.exp_tol) - Element.identity(a.s)
            out = []
            for N in range(cfg.N_max + 1):
                aN = n_norm(a, N, m_cut)
                out.append(("le", n_norm(E, N, m_cut), aN))
                for j in range(1, cfg.exp_M_max + 1):
                    pj = a.partial_j(j)
                    rhs = n_norm(pj, N, m_cut) + n_norm(pj, 0, m_cut) * aN
                    out.append(("le", n_norm(E.partial_j(j), N, m_cut), rhs))
            return out

        return run

    return [make(_self_adjoint(cfg, rng)) for _ in range(cfg.exp_count)]


def check_exp_ideal_estimate(cfg, rng) -> list[Instance]:
    """||e^{ic}||_{M,0} <= prod_{j=1}^M (1 + ||c||_{j,0})^{2^{M-j}}."""

    def make(c):
        def run(m_cut):
            E = exp_i(c, cfg.exp_tol)
            out = []
            for M in range(cfg.exp_M_max + 1):
                rhs = NormValue.exact(1.0)
                for j in range(1, M + 1):
                    rhs = rhs * (mn_norm(c, j, 0, m_cut).plus(1.0) ** (2 ** (M - j)))
                out.append(("le", mn_norm(E, M, 0, m_cut), rhs))
            return out

        return run

    return [make(_self_adjoint(cfg, rng)) for _ in range(cfg.exp_count)]


def check_exp_trig_estimate(cfg, rng) -> list[Instance]:
    """||e^{i phi}||_{C^M} <= prod_{j=1}^M (1 + ||phi||_{C^j}) for real phi."""

    def make(phi):
        def run(m_cut):
            out = []
            for M in range(cfg.exp_M_max + 1):
                rhs = NormValue.exact(1.0)
                for j in range(1, M + 1):
                    rhs = rhs * phi.ck_norm(j).plus(1.0)
                out.append(("le", ck_norm_exp_i(phi, M), rhs))
            return out

        return run

    return [make(random_trig(rng, 3, exact=False, real=True)) for _ in range(cfg.exp_count)]


def check_hs_submultiplicative(cfg, rng) -> list[Instance]:
    """Empirical check that the combined norm with constant S is submultiplicative."""

    def make(a, b):
        def run(m_cut):
            return [
                ("le", hs_norm(a * b, M, N, cfg.S, m_cut), hs_norm(a, M, N, cfg.S, m_cut) * hs_norm(b, M, N, cfg.S, m_cut))
                for M in range(2)
                for N in range(2)
            ]

        return run

    def hs_elem():
        return toeplitz(cfg.s, random_trig(rng, 2, exact=False)) + _ideal(cfg, rng)

    return [make(hs_elem(), hs_elem()) for _ in range(cfg.toeplitz_count)]


CHECKS: dict[str, Callable] = {
    "nprop_monotone_in_N": check_nprop_monotone,
    "nprop_submultiplicative": check_nprop_submultiplicative,
    "nprop_adjoint_bound": check_nprop_adjoint,
    "mnprop_recursion": check_mnprop_recursion,
    "mnprop_monotone_in_N": check_mnprop_monotone,
    "mnprop_submultiplicative": check_mnprop_submultiplicative,
    "mnprop_delta_bound": check_mnprop_delta,
    "mnprop_adjoint_bound": check_mnprop_adjoint,
    "partial_j_binomial": check_partial_binomial,
    "delta_P_binomial_inverse": check_binomial_inverse,
    "expectation_contractive": check_expectation_contractive,
    "toeplitz_defect_identity": check_toeplitz_identity,
    "toeplitz_defect_bound": check_toeplitz_bound,
    "toeplitz_ideal_products": check_toeplitz_ideal_products,
    "generalized_toeplitz_bounds": check_generalized_toeplitz,
    "exp_minus_identity": check_exp_minus_identity,
    "exp_ideal_estimate": check_exp_ideal_estimate,
    "exp_trig_estimate": check_exp_trig_estimate,
    "hs_norm_submultiplicative": check_hs_submultiplicative,
}


def _verdict(triples: list[Triple]) -> tuple[str, float]:
    status, worst = "pass", math.inf
    for rel, lhs, rhs in triples:
        st, margin = (certify_le if rel == "le" else certify_eq)(lhs, rhs)
        worst = min(worst, margin)
        if st == "fail":
            status = "fail"
        elif st == "inconclusive" and status == "pass":
            status = "inconclusive"
    return status, worst


def run_check(name: str, seed: int, cfg: InequalityConfig) -> dict:
    index = list(CHECKS).index(name)
    instances = CHECKS[name](cfg, _rng(seed, index))
    counts = {"pass": 0, "fail": 0, "inconclusive": 0}
    worst = math.inf
    for inst in instances:
        m_cut = cfg.m_cut
        while True:
            status, margin = _verdict(inst(m_cut))
            if status != "inconclusive" or m_cut >= cfg.m_cut_cap:
                break
            m_cut *= 2
        counts[status] += 1
        worst = min(worst, margin)
    overall = "fail" if counts["fail"] else ("inconclusive" if counts["inconclusive"] else "pass")
    return {
        "inequality": name,
        "instances": len(instances),
        "status": overall,
        "worst_margin": worst if math.isfinite(worst) else None,
        "seed": seed,
        "counts": counts,
    }


def verify_inequalities(seed: int, count: int | None = None, config: InequalityConfig | None = None) -> dict:
    cfg = config or InequalityConfig()
    if count is not None:
        cfg.count = count
    names = cfg.checks or list(CHECKS)
    rows = [run_check(name, seed, cfg) for name in names]
    return {
        "seed": seed,
        "config": {k: v for k, v in asdict(cfg).items() if k != "checks"},
        "results": rows,
        "all_pass": all(r["status"] == "pass" for r in rows),
    }
