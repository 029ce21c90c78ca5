"""Seeded random instances for the verification suites.

All randomness flows through ``numpy.random.Generator`` with the PCG64 bit
generator, so an integer seed reproduces every instance on any platform.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import scalars as sc
from .algebra import Element
from .sadic import unit_residues
from .symbols import DiagonalSymbol, n_units
from .trig import LambdaSymbol, TrigPoly

PRNG_NAME = "numpy.PCG64"
_DENOMS = (1, 2, 4)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_scalar(rng: np.random.Generator, exact: bool = True, scale: float = 1.0):
    """Small Gaussian rational (exact) or complex normal sample (float)."""
    if exact:
        q = int(rng.choice(_DENOMS))
        re, im = (int(v) for v in rng.integers(-4, 5, size=2))
        return sc.exact((Fraction(re, q), Fraction(im, q)))
    re, im = rng.normal(size=2) * scale
    return complex(re, im)


def _scalar_array(rng, shape, exact: bool, scale: float = 1.0) -> np.ndarray:
    count = int(np.prod(shape))
    if exact:
        return sc.exact_array([random_scalar(rng, True) for _ in range(count)], shape=shape)
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) * scale


def random_symbol(
    rng: np.random.Generator,
    s: int,
    d_max: int = 3,
    e_max: int = 2,
    tail: str = "zero",
    exact: bool = True,
    scale: float = 1.0,
) -> DiagonalSymbol:
    """Random symbol with d <= d_max, e <= e_max.

    ``tail`` is ``"zero"`` (ideal coefficient), ``"const"`` (x-independent) or
    ``"any"`` (arbitrary x-dependent tail).
    """
    e = int(rng.integers(1, e_max + 1))
    d = int(rng.integers(0, d_max + 1))
    U = n_units(s, e)
    core = _scalar_array(rng, (d, U), exact, scale)
    if tail == "zero":
        t = sc.exact_zeros(U) if exact else np.zeros(U, complex)
    elif tail == "const":
        c = random_scalar(rng, exact, scale)
        t = sc.exact_array([c] * U) if exact else np.full(U, c)
    else:
        t = _scalar_array(rng, (U,), exact, scale)
    return DiagonalSymbol(s, e, core, t)


def random_x_symbol(rng, s: int, e: int, exact: bool = True, mean_zero: bool = False, scale: float = 1.0):
    """Random m-independent symbol at residue depth e, optionally with Haar mean 0."""
    U = n_units(s, e)
    vals = _scalar_array(rng, (U,), exact, scale)
    sym = DiagonalSymbol.x_only(s, e, list(vals))
    if mean_zero:
        sym = sym - DiagonalSymbol.constant(s, sym.e1_average())
    return sym


def random_cylinder_symbol(rng: np.random.Generator, s: int, k: int, exact: bool = True) -> DiagonalSymbol:
    """Symbol of M_f for a random depth-k cylinder function f on Z_s."""
    values = [random_scalar(rng, exact) for _ in range(s**k)]
    return DiagonalSymbol.from_continuous_function(s, k, values)


def random_element(
    rng: np.random.Generator,
    s: int,
    support: int = 2,
    d_max: int = 3,
    e_max: int = 2,
    tail: str = "zero",
    exact: bool = True,
    n_terms: int | None = None,
    scale: float = 1.0,
) -> Element:
    """Random element with modes drawn from [-support, support]."""
    modes = np.arange(-support, support + 1)
    k = n_terms if n_terms is not None else int(rng.integers(1, len(modes) + 1))
    chosen = sorted(int(n) for n in rng.choice(modes, size=min(k, len(modes)), replace=False))
    terms = {}
    for n in chosen:
        terms[n] = random_symbol(rng, s, d_max, e_max, tail, exact, scale)
    return Element(s, terms)


def random_self_adjoint(rng, s: int, support: int = 2, d_max: int = 3, e_max: int = 2, exact: bool = True, scale=1.0):
    a = random_element(rng, s, support, d_max, e_max, "zero", exact, scale=scale)
    half = sc.exact(Fraction(1, 2)) if exact else 0.5
    return (a + a.adjoint()).scale(half)


def random_trig(rng: np.random.Generator, degree: int, exact: bool = True, real: bool = False, scale: float = 1.0) -> TrigPoly:
    """Random trigonometric polynomial with frequencies in [-degree, degree]."""
    coeffs = {n: random_scalar(rng, exact, scale) for n in range(-degree, degree + 1) if rng.random() < 0.7}
    p = TrigPoly(coeffs)
    if real:
        half = sc.exact(Fraction(1, 2)) if exact and p.is_exact else 0.5
        p = (p + p.conj()).scale(half)
    return p


def random_sparse_trig(rng: np.random.Generator, degree: int, max_terms: int = 3, exact: bool = True) -> TrigPoly:
    """Trigonometric polynomial with 1..max_terms random frequencies in [-degree, degree]."""
    k = int(rng.integers(1, max_terms + 1))
    freqs = rng.choice(np.arange(-degree, degree + 1), size=min(k, 2 * degree + 1), replace=False)
    return TrigPoly({int(n): random_scalar(rng, exact) for n in freqs})


def random_invertible_trig(rng: np.random.Generator, degree: int) -> TrigPoly:
    """A dominant monomial plus a small perturbation, hence invertible with known winding."""
    n = int(rng.integers(-degree, degree + 1))
    c = np.exp(2j * np.pi * rng.random()) * (1.0 + rng.random())
    base = TrigPoly.monomial(n, c)
    noise = {k: complex(*(rng.normal(size=2) * 0.05)) for k in range(-degree, degree + 1)}
    return base + TrigPoly(noise)


def random_lambda(
    rng: np.random.Generator,
    s: int,
    e: int = 2,
    n_modes: int = 3,
    degree: int = 3,
    exact: bool = True,
    normalized: bool = True,
) -> LambdaSymbol:
    """Random Lambda; normalized means lambda_0 = 0 and every lambda_n has Haar mean 0."""
    pool = [n for n in range(-degree, degree + 1) if not (normalized and n == 0)]
    k = int(rng.integers(1, n_modes + 1))
    chosen = sorted(int(n) for n in rng.choice(pool, size=min(k, len(pool)), replace=False))
    return LambdaSymbol(s, {n: random_x_symbol(rng, s, e, exact, mean_zero=normalized) for n in chosen})


def cylinder_indicator_table(s: int, k: int) -> dict[int, DiagonalSymbol]:
    """Indicators of the residue classes r mod s**k as symbols."""
    return {
        r: DiagonalSymbol.from_continuous_function(s, k, lambda x, r=r: 1 if x == r else 0) for r in range(s**k)
    }


__all__ = [
    "PRNG_NAME",
    "cylinder_indicator_table",
    "make_rng",
    "random_cylinder_symbol",
    "random_element",
    "random_invertible_trig",
    "random_lambda",
    "random_scalar",
    "random_self_adjoint",
    "random_sparse_trig",
    "random_symbol",
    "random_trig",
    "random_x_symbol",
    "unit_residues",
]
