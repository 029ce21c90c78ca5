from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsalgebra.sadic import (
    ZERO,
    SAdicError,
    SAdicInt,
    snorm,
    split_int,
    unit_index,
    unit_residues,
    valuation_split,
)


def Z(k, s, d):
    return SAdicInt.from_int(k, s, d)


def test_add_examples():
    assert SAdicInt(2, (1, 1, 1, 1)) + SAdicInt(2, (1, 0, 0, 0)) == SAdicInt(2, (0, 0, 0, 0))
    assert Z(47, 10, 3) + Z(0, 10, 3) == Z(47, 10, 3)
    assert (Z(121, 3, 5) + Z(95, 3, 5)).to_int() == 216


def test_mul_examples():
    assert Z(11, 2, 4) * Z(0, 2, 4) == Z(0, 2, 4)
    m1 = SAdicInt(2, (1, 1, 1, 1))
    assert m1 * m1 == Z(1, 2, 4)
    assert (Z(13, 5, 4) * Z(21, 5, 4)).to_int() == 273 % 5**4


def test_negative_embedding_is_s_complement():
    assert Z(-1, 3, 4).digits == (2, 2, 2, 2)
    assert Z(-1, 7, 3) + Z(1, 7, 3) == Z(0, 7, 3)


def test_mismatch_and_range_errors():
    with pytest.raises(SAdicError):
        Z(1, 2, 3) + Z(1, 2, 4)
    with pytest.raises(SAdicError):
        Z(1, 2, 3) * Z(1, 3, 3)
    with pytest.raises(SAdicError):
        SAdicInt(3, (0, 3))
    with pytest.raises(SAdicError):
        SAdicInt(1, (0,))


def test_snorm_examples():
    assert snorm(Z(6, 3, 4)) == Fraction(1, 3)
    assert snorm(Z(5, 7, 3)) == 1
    zero = Z(0, 2, 5)
    assert snorm(zero) == 0 and zero.zero_at_depth


def test_valuation_split_examples():
    v = valuation_split(Z(24, 2, 6))
    assert (v.m, v.unit.to_int()) == (3, 3)
    v = valuation_split(Z(7, 10, 3))
    assert (v.m, v.unit.to_int()) == (0, 7)
    v = valuation_split(Z(54, 3, 5))
    assert (v.m, v.unit.to_int()) == (3, 2)
    assert v.unit.depth == 2
    assert valuation_split(Z(0, 3, 4)) is ZERO


def test_unit_residues_examples():
    assert unit_residues(2, 1) == (1,)
    assert unit_residues(2, 2) == (1, 3)
    assert unit_residues(3, 2) == (1, 2, 4, 5, 7, 8)
    for s in (2, 3, 10):
        for e in (1, 2, 3):
            res = unit_residues(s, e)
            assert len(res) == (s - 1) * s ** (e - 1)
            assert [unit_index(s, e, r) for r in res] == list(range(len(res)))


def test_split_int():
    assert split_int(24, 2) == (3, 3)
    assert split_int(-18, 3) == (2, -2)
    with pytest.raises(ValueError):
        split_int(0, 5)


def test_json_roundtrip():
    a = Z(1234, 10, 5)
    assert a.to_json() == {"s": 10, "digits": [4, 3, 2, 1, 0]}
    assert SAdicInt.from_json(a.to_json()) == a


bases = st.sampled_from([2, 3, 5, 10])


@st.composite
def triples(draw):
    s = draw(bases)
    d = draw(st.integers(1, 6))
    ints = st.integers(-(10**6), 10**6)
    return s, d, [Z(draw(ints), s, d) for _ in range(3)]


@given(triples())
def test_ring_laws(data):
    s, d, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Z(0, s, d)


@given(bases, st.integers(1, 6), st.integers(0, 10**9))
def test_int_roundtrip(s, d, k):
    assert Z(k, s, d).to_int() == k % s**d


@given(triples())
def test_snorm_bounds(data):
    _, _, (a, _, _) = data
    assert snorm(a) <= 1
    assert (snorm(a) == 1) == (a.digits[0] != 0)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6), st.integers(-(10**6), 10**6), st.integers(-(10**6), 10**6))
def test_snorm_multiplicative_for_prime_base(s, d, x, y):
    a, b = Z(x, s, d), Z(y, s, d)
    va, vb = a.valuation(), b.valuation()
    if va is not None and vb is not None and va + vb < d:
        assert snorm(a * b) == snorm(a) * snorm(b)


def test_snorm_not_multiplicative_for_composite_base():
    # units mod 10 with a product divisible by 10: |.|_10 has zero divisors
    assert snorm(Z(2, 10, 3) * Z(5, 10, 3)) == Fraction(1, 10)


@given(triples())
def test_valuation_split_recombines(data):
    _, _, (a, _, _) = data
    v = valuation_split(a)
    if a.zero_at_depth:
        assert v is ZERO
    else:
        assert v.unit.digits[0] != 0
        assert v.recombine() == a
