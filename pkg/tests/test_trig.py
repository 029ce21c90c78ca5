import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsalgebra import scalars as sc
from hsalgebra.sampling import make_rng, random_lambda, random_trig
from hsalgebra.symbols import DiagonalSymbol
from hsalgebra.trig import LambdaSymbol, TrigPoly, sup_interval_from_coeffs


def test_conjugate_coefficients():
    p = TrigPoly({1: sc.exact((1, 2)), -2: sc.exact(3)})
    q = p.conj()
    assert q.coefficient(-1) == sc.exact((1, -2))
    assert q.coefficient(2) == sc.exact(3)


def test_derivative_multiplies_by_n():
    p = TrigPoly({2: 1.5, -3: 1j})
    d = p.derivative(1)
    assert d.coefficient(2) == pytest.approx(3.0)
    assert d.coefficient(-3) == pytest.approx(-3j)


def test_ck_norm_examples():
    e1 = TrigPoly.monomial(1)
    for k in range(5):
        assert e1.ck_norm(k).value == pytest.approx(2**k, rel=1e-12)
    c = TrigPoly.constant(sc.exact((3, 4)))
    for k in range(4):
        assert c.ck_norm(k).value == pytest.approx(5.0)


@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_ck_norm_recursion(seed, k):
    p = random_trig(make_rng(seed), 3, exact=False)
    lhs = p.ck_norm(k + 1)
    rhs = p.ck_norm(k) + p.derivative(1).ck_norm(k)
    assert lhs.lower <= rhs.upper * (1 + 1e-9) + 1e-12
    assert rhs.lower <= lhs.upper * (1 + 1e-9) + 1e-12


@given(st.integers(0, 2**32 - 1))
def test_sup_interval_brackets_dense_grid(seed):
    p = random_trig(make_rng(seed), 5, exact=False)
    nv = p.sup_norm()
    grid = np.abs(p(np.arange(20000) / 20000)).max() if not p.is_zero() else 0.0
    # the lower end is itself a sample of |p|, so the coarse grid cannot beat the upper end
    assert grid <= nv.upper * (1 + 1e-12) + 1e-15
    assert nv.upper - nv.lower <= 1e-6 * nv.upper + 1e-15
    assert nv.upper <= max(p.l1_norm(), 0.0) * (1 + 1e-12) + 1e-15


def test_sup_interval_gap_is_small():
    lo, hi = sup_interval_from_coeffs(np.array([-1, 1]), np.array([1.0, 1.0]))
    assert lo <= 2.0 <= hi and hi - lo <= 2e-6 * 2


def test_min_abs_certified():
    p = TrigPoly({0: 2.0, 1: 1.0})
    sampled, certified = p.min_abs()
    assert certified <= 1.0 + 1e-12 <= sampled + 1e-9
    assert certified > 0.5


def test_trig_products_and_json():
    rng = make_rng(11)
    p, q = random_trig(rng, 3), random_trig(rng, 3)
    theta = np.array([0.1, 0.37, 0.8])
    assert np.allclose((p * q).to_float()(theta), p.to_float()(theta) * q.to_float()(theta))
    assert TrigPoly.from_json(p.to_json()) == p


def test_lambda_symbol_basics():
    rng = make_rng(2)
    lam = random_lambda(rng, 3, e=2)
    assert all(abs(sc.to_complex(sym.e1_average())) < 1e-15 for sym in lam.modes.values())
    assert 0 not in lam.modes
    assert LambdaSymbol.from_json(lam.to_json()) == lam
    phi = TrigPoly({1: 2, -1: 3})
    lt = LambdaSymbol.from_trig(3, phi)
    assert lt.x_independent() and lt.as_trig() == phi
    assert lt.e1_average() == phi
    with pytest.raises(ValueError):
        LambdaSymbol(2, {1: DiagonalSymbol.indicator(2, 0)})


def test_lambda_sup_norm_matches_residue_max():
    lam = LambdaSymbol(2, {1: DiagonalSymbol.x_only(2, 2, [1.0, 3.0])})
    nv = lam.sup_norm()
    assert nv.lower == pytest.approx(3.0) and nv.upper == pytest.approx(3.0, rel=1e-6)
    assert math.isclose(lam.ck_norm(1).upper, 6.0, rel_tol=1e-6)
