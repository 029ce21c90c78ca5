from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsalgebra import scalars as sc
from hsalgebra.algebra import Element, toeplitz
from hsalgebra.derivations import (
    ConsistencyError,
    Decomposition,
    DerivationError,
    DLambda,
    DPhi,
    GeneratorImages,
    Inner,
    covariant_solve,
    decompose,
    derivation_from_json,
    fourier_component_by_averaging,
    fourier_component_of_derivation,
    invariant_solve,
    is_inner_certificate,
)
from hsalgebra.sampling import (
    cylinder_indicator_table,
    make_rng,
    random_element,
    random_lambda,
    random_symbol,
    random_trig,
)
from hsalgebra.symbols import DiagonalSymbol
from hsalgebra.trig import LambdaSymbol, TrigPoly

seeds = st.integers(0, 2**32 - 1)


def _random_derivation(rng, s, kind=None):
    kind = kind or rng.choice(["dphi", "dlambda", "inner", "sum"])
    if kind == "dphi":
        return DPhi(s, random_trig(rng, 2))
    if kind == "dlambda":
        return DLambda(random_lambda(rng, s, e=2, n_modes=2, degree=2, normalized=False))
    if kind == "inner":
        return Inner(random_element(rng, s, support=2, d_max=2, e_max=2, tail="const"))
    return DPhi(s, random_trig(rng, 2)) + DLambda(random_lambda(rng, s, e=1, n_modes=2, degree=2)) + Inner(
        random_element(rng, s, support=1, d_max=2, e_max=1)
    )


def test_apply_examples():
    s = 2
    rng = make_rng(0)
    phi = random_trig(rng, 3)
    V, Vs = Element.V(s), Element.Vstar(s)
    d = DPhi(s, phi)
    assert d(V) == V * toeplitz(s, phi)
    assert d(Vs) == -(toeplitz(s, phi) * Vs)
    assert d(V).quotient_q() == phi.shift(1)
    lam = LambdaSymbol(s, {1: DiagonalSymbol.x_only(s, 2, [1, -1]), 2: DiagonalSymbol.x_only(s, 2, [2, 3])})
    assert DLambda(lam)(V).is_zero()
    w = random_element(rng, s, tail="any")
    assert Inner(w)(Element.identity(s)).is_zero()


def test_dphi_on_multipliers():
    s = 3
    phi = TrigPoly({1: 1, -2: sc.exact((0, 1))})
    d = DPhi(s, phi)
    table = cylinder_indicator_table(s, 2)
    images = {r: d(Element.multiplier(sym)) for r, sym in table.items()}
    assert all(img.in_Is() for img in images.values())
    assert any(not img.is_zero() for img in images.values())
    # the table with vanishing multiplier images is not a derivation
    zero_dM = {r: Element.zero(s) for r in table}
    naive = GeneratorImages(s, 2, d(Element.V(s)), d(Element.Vstar(s)), zero_dM)
    assert naive.consistency_defects()["intertwining"] > 0
    assert max(GeneratorImages(s, 2, d(Element.V(s)), d(Element.Vstar(s)), images).consistency_defects().values()) == 0


def test_fourier_component_examples():
    s = 2
    rng = make_rng(3)
    F = random_symbol(rng, s)
    a = random_element(rng, s, tail="const")
    inner = Inner(Element.monomial(1, F))
    for n in range(-3, 4):
        comp = fourier_component_of_derivation(inner, n, a)
        assert comp.is_zero() == (n != 1) or comp.is_zero()
    assert fourier_component_of_derivation(inner, 1, a) == inner(a)
    phi = TrigPoly({-1: 2, 0: 1, 2: 3})
    d = DPhi(s, phi)
    for n in (-1, 0, 2):
        assert fourier_component_of_derivation(d, n, a) == DPhi(s, TrigPoly({n: phi.coefficient(n)}))(a)


@given(seeds)
def test_components_sum_to_derivation(seed):
    rng = make_rng(seed)
    s = 2
    delta = _random_derivation(rng, s)
    a = random_element(rng, s, support=2, d_max=2, e_max=2, tail="const")
    img = delta(a)
    total = Element.zero(s)
    for n in range(-8, 9):
        total = total + fourier_component_of_derivation(delta, n, a)
    assert total == img


def test_components_match_discrete_average():
    rng = make_rng(12)
    s = 2
    delta = _random_derivation(rng, s, "sum")
    a = random_element(rng, s, support=2, d_max=2, e_max=1, tail="const")
    for n in (-2, 0, 1):
        want = fourier_component_of_derivation(delta, n, a).to_float()
        got = fourier_component_by_averaging(delta, n, a, K=32)
        assert got.max_diff(want) <= 1e-11


@given(seeds, st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
def test_component_covariance(seed, theta):
    rng = make_rng(seed)
    s = 2
    delta = _random_derivation(rng, s)
    a = random_element(rng, s, support=2, d_max=2, e_max=1, tail="const")
    n = int(rng.integers(-2, 3))
    lhs = fourier_component_of_derivation(delta, n, a.rho(theta)).rho(-theta)
    quarter = int(-4 * n * theta) % 4
    phase = [sc.exact(1), sc.exact((0, 1)), sc.exact(-1), sc.exact((0, -1))][quarter]
    rhs = fourier_component_of_derivation(delta, n, a).scale(phase)
    assert lhs == rhs


@given(seeds)
def test_leibniz_for_every_primitive(seed):
    rng = make_rng(seed)
    s = int(rng.choice([2, 3]))
    delta = _random_derivation(rng, s)
    a = random_element(rng, s, support=2, d_max=2, e_max=1, tail="const")
    b = random_element(rng, s, support=2, d_max=2, e_max=1, tail="const")
    assert delta(a * b) == delta(a) * b + a * delta(b)


@given(seeds)
def test_ideal_invariance(seed):
    rng = make_rng(seed)
    s = 2
    delta = _random_derivation(rng, s)
    c = random_element(rng, s, support=2, d_max=3, e_max=2, tail="zero")
    assert delta(c).in_Is()


def test_generator_images_reproduce_structured_derivation():
    rng = make_rng(5)
    s, k = 2, 2
    delta = _random_derivation(rng, s, "sum")
    table = GeneratorImages.from_derivation(delta, s, k)
    assert max(table.consistency_defects().values()) == 0.0
    for _ in range(3):
        a = random_element(rng, s, support=2, d_max=1, e_max=1, tail="const")
        assert table(a) == delta(a)
    deep = Element.multiplier(DiagonalSymbol.from_continuous_function(s, 3, lambda r: 1 if r == 5 else 0))
    with pytest.raises(DerivationError):
        table(deep)


def test_generator_images_inconsistent_rejected():
    s = 2
    dM = {r: Element.zero(s) for r in range(s)}
    bogus = GeneratorImages(s, 1, Element.V(s), Element.zero(s), dM)
    with pytest.raises(ConsistencyError):
        bogus.validate()
    with pytest.raises(ConsistencyError):
        decompose(bogus)


def test_covariant_solve_examples():
    s = 3
    g = DiagonalSymbol.x_only(s, 1, [sc.exact(2), sc.exact(5)])
    G = DiagonalSymbol.from_rows(s, 1, [list(g.tail)], [0, 0])
    R, r = covariant_solve(1, G)
    assert R.is_zero() and r == g.scale(-1)
    R, r = covariant_solve(2, DiagonalSymbol.zero(s))
    assert R.is_zero() and r.is_zero()
    G = DiagonalSymbol.indicator(s, 1)
    R, r = covariant_solve(-1, G)
    assert r == DiagonalSymbol.constant(s, -1)
    assert R == DiagonalSymbol.indicator(s, 0)
    with pytest.raises(DerivationError):
        covariant_solve(1, DiagonalSymbol.constant(s, 1))


@given(seeds)
def test_covariant_and_invariant_recursions(seed):
    rng = make_rng(seed)
    s = 2
    G = random_symbol(rng, s, tail="zero")
    R, r = covariant_solve(1, G)
    H = R + r
    assert H.alpha() - H == G
    assert R.tail_is_zero() and r.d == 0
    F0 = random_symbol(rng, s, tail="zero")
    R0 = invariant_solve(F0)
    assert R0.beta() - R0 == F0 and R0.tail_is_zero()


def test_decompose_examples():
    s = 2
    dec = decompose(DPhi(s, TrigPoly.monomial(1)))
    assert dec.phi == TrigPoly.monomial(1) and dec.lam.is_zero() and dec.inner_generator.is_zero()
    assert dec.residual.upper == 0 and not is_inner_certificate(dec)

    lam = LambdaSymbol(s, {1: DiagonalSymbol.x_only(s, 2, [1, -1])})
    dec = decompose(DLambda(lam))
    assert dec.phi.is_zero() and dec.lam == lam and dec.inner_generator.is_zero()
    assert not is_inner_certificate(dec)

    R = random_symbol(make_rng(1), s, tail="zero")
    w = Element.monomial(1, R)
    dec = decompose(Inner(w))
    assert dec.phi.is_zero() and dec.lam.is_zero()
    assert dec.residual.upper == 0 and is_inner_certificate(dec)
    assert Inner(dec.inner_generator)(Element.V(s)) == Inner(w)(Element.V(s))


def test_decompose_rejects_non_hs_image():
    s = 2
    weird = Element.multiplier(DiagonalSymbol.x_only(s, 2, [1, 2]))
    images = GeneratorImages(s, 1, weird, Element.zero(s), {0: Element.zero(s), 1: Element.zero(s)})
    with pytest.raises(DerivationError):
        decompose(images)


@given(seeds)
def test_roundtrip_and_uniqueness(seed):
    rng = make_rng(seed)
    s = int(rng.choice([2, 3]))
    phi = random_trig(rng, 3)
    lam = random_lambda(rng, s, e=2)
    w = random_element(rng, s, support=2, d_max=2, e_max=2)
    delta = DPhi(s, phi) + DLambda(lam) + Inner(w)
    dec = decompose(delta)
    assert dec.phi == phi
    assert dec.lam.max_diff(lam) == 0
    assert dec.residual.upper == 0
    # an equivalent presentation in a different order, and as a generator table
    other = decompose(Inner(w) + DLambda(lam) + DPhi(s, phi))
    assert other.phi == dec.phi and other.lam == dec.lam
    table = decompose(GeneratorImages.from_derivation(delta, s, 2))
    assert table.phi == dec.phi and table.lam == dec.lam


def test_float_roundtrip():
    rng = make_rng(2)
    s = 3
    phi = random_trig(rng, 3, exact=False)
    lam = random_lambda(rng, s, e=1, exact=False)
    w = random_element(rng, s, support=2, d_max=2, e_max=1, exact=False)
    dec = decompose(DPhi(s, phi) + DLambda(lam) + Inner(w))
    assert dec.phi.close(phi, 1e-12) and dec.lam.max_diff(lam) <= 1e-9
    assert dec.residual.upper <= 1e-9


def test_dlambda_vanishing_iff_theta_independent():
    rng = make_rng(4)
    s = 2
    gens = [Element.V(s), Element.Vstar(s)] + [Element.multiplier(x) for x in cylinder_indicator_table(s, 2).values()]
    flat = LambdaSymbol(s, {0: DiagonalSymbol.x_only(s, 2, [1, 7])})
    assert all(DLambda(flat)(g).is_zero() for g in gens)
    for _ in range(5):
        lam = random_lambda(rng, s, e=2)
        assert not lam.theta_independent()
        assert any(not DLambda(lam)(g).is_zero() for g in gens)


def test_json_roundtrip():
    rng = make_rng(7)
    s = 2
    delta = _random_derivation(rng, s, "sum")
    back = derivation_from_json(delta.to_json())
    a = random_element(rng, s, tail="const")
    assert back(a) == delta(a)
    table = GeneratorImages.from_derivation(delta, s, 1)
    assert derivation_from_json(table.to_json())(Element.V(s)) == delta(Element.V(s))
    dec = decompose(delta)
    data = dec.to_json()
    assert set(data) == {"phi", "lambda", "inner", "residual"}
    with pytest.raises(DerivationError):
        derivation_from_json({"type": "nope"})
