import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsalgebra.algebra import Element, exp_i, matrix_unit
from hsalgebra.ktheory import (
    K0Class,
    NotInvertibleError,
    NotProjectionError,
    KTheoryError,
    evaluation_splitting,
    index_pairing,
    k0_class,
    winding_number,
)
from hsalgebra.sampling import make_rng, random_invertible_trig, random_self_adjoint
from hsalgebra.symbols import DiagonalSymbol
from hsalgebra.trig import TrigPoly


def unit_projection(s):
    return Element.identity(s) - Element.V(s) * Element.Vstar(s)


def test_k0_examples():
    for s in (2, 3):
        for e in (1, 2, 3):
            cls = k0_class(unit_projection(s), e=e)
            assert cls == K0Class.constant(s, 1) and cls.e == e
        assert k0_class(matrix_unit(s, 0, 0)) == K0Class.constant(s, 1)
    lam = DiagonalSymbol.from_continuous_function(2, 2, lambda r: 1 if r == 1 else 0)
    p = matrix_unit(2, 0, 0) * Element.multiplier(lam)
    assert k0_class(p).to_json() == {"e": 2, "values": [1, 0]}


def test_k0_rejects_non_projection():
    with pytest.raises(NotProjectionError):
        k0_class(matrix_unit(2, 0, 0, 2))
    with pytest.raises(NotProjectionError):
        k0_class(matrix_unit(2, 1, 0))
    with pytest.raises(KTheoryError):
        k0_class(Element.identity(2))


def test_winding_examples():
    assert winding_number(TrigPoly.monomial(1)) == 1
    assert winding_number(TrigPoly.constant(5)) == 0
    assert winding_number(TrigPoly({2: 1, 0: 0.1})) == 2
    with pytest.raises(NotInvertibleError):
        winding_number(TrigPoly({0: 1, 1: 1}))


def test_index_pairing_examples():
    assert index_pairing(TrigPoly.monomial(1)) == K0Class.constant(2, -1)
    assert index_pairing(TrigPoly.constant(1)) == K0Class.constant(2, 0)
    assert index_pairing(TrigPoly.monomial(-1), s=3) == K0Class.constant(3, 1)
    assert evaluation_splitting(index_pairing(TrigPoly.monomial(1))) == 1


def test_orthogonal_sum_additivity():
    s = 2
    lam = DiagonalSymbol.from_continuous_function(s, 2, lambda r: 1 if r == 3 else 0)
    p = matrix_unit(s, 0, 0) * Element.multiplier(lam)
    q = matrix_unit(s, 1, 1) + matrix_unit(s, 2, 2)
    assert k0_class(p + q) == k0_class(p) + k0_class(q)
    assert (k0_class(p) + k0_class(q)).values == (2, 3)


def test_refinement_stability():
    cls = K0Class(3, 1, (1, 4))
    fine = cls.refine(3)
    assert fine.e == 3 and fine == cls
    assert fine.coarsest() == cls and fine.coarsest().e == 1
    p = matrix_unit(3, 0, 0) + matrix_unit(3, 1, 1)
    assert k0_class(p, e=3) == k0_class(p, e=1)


def test_conjugation_by_unitary_preserves_class():
    rng = make_rng(3)
    s = 2
    p = matrix_unit(s, 0, 0) + matrix_unit(s, 2, 2)
    h = random_self_adjoint(rng, s, support=2, d_max=2, e_max=1, exact=False, scale=0.3)
    u = exp_i(h, 1e-14)
    q = u * p * u.adjoint()
    assert k0_class(q, tol=1e-9) == k0_class(p)


@given(st.integers(0, 2**32 - 1))
def test_winding_additive(seed):
    rng = make_rng(seed)
    f, g = random_invertible_trig(rng, 3), random_invertible_trig(rng, 3)
    assert winding_number(f * g) == winding_number(f) + winding_number(g)


def test_json():
    cls = K0Class(2, 2, (1, 0))
    assert K0Class.from_json(cls.to_json(), 2) == cls
