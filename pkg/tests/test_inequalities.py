import math

import pytest

from hsalgebra.inequalities import (
    CHECKS,
    TOEPLITZ_CONSTANT,
    InequalityConfig,
    ck_norm_exp_i,
    run_check,
    toeplitz_defect,
    toeplitz_defect_formula,
    verify_inequalities,
)
from hsalgebra.sampling import make_rng, random_trig
from hsalgebra.trig import TrigPoly


def test_constant_value():
    assert TOEPLITZ_CONSTANT == pytest.approx(math.pi**2 / 3 - 1)


@pytest.mark.parametrize("name", list(CHECKS))
def test_each_check_passes_small(name):
    cfg = InequalityConfig(count=8, toeplitz_count=8, exp_count=8)
    row = run_check(name, 1, cfg)
    assert row["status"] == "pass", row
    assert set(row) >= {"inequality", "instances", "status", "worst_margin", "seed"}


def test_report_shape_and_determinism():
    cfg = InequalityConfig(count=3, toeplitz_count=3, exp_count=3, checks=["nprop_monotone_in_N", "exp_trig_estimate"])
    a = verify_inequalities(5, config=cfg)
    b = verify_inequalities(5, config=InequalityConfig(**{**cfg.__dict__}))
    assert a == b and a["all_pass"]
    assert [r["inequality"] for r in a["results"]] == ["nprop_monotone_in_N", "exp_trig_estimate"]


def test_weakened_constant_is_detected():
    cfg = InequalityConfig(constant=0.1)
    row = run_check("toeplitz_defect_bound", 0, cfg)
    assert row["status"] == "fail"
    assert row["worst_margin"] < 0


def test_defect_formula_agrees():
    rng = make_rng(3)
    for _ in range(5):
        phi, psi = random_trig(rng, 4), random_trig(rng, 4)
        assert toeplitz_defect(2, phi, psi) == toeplitz_defect_formula(2, phi, psi)


def test_ck_norm_of_exponential():
    # exp(i c) with constant c has C^M norm 1
    assert ck_norm_exp_i(TrigPoly.constant(0.7), 3).upper == pytest.approx(1.0)
    # the first-order product estimate for exp(i cos 2 pi theta)
    phi = TrigPoly({1: 0.5, -1: 0.5})
    assert ck_norm_exp_i(phi, 1).upper <= (1 + phi.ck_norm(1).upper) * (1 + 1e-9)
