"""Golden-file tests for every subcommand.

Set HSALG_REGEN_GOLDEN=1 to rewrite the golden files after an intended change.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hsalgebra import algebra as alg
from hsalgebra.cli import main

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
REGEN = os.environ.get("HSALG_REGEN_GOLDEN") == "1"

CASES = {
    "verify_relations": ["verify-relations", "--s", "3", "--seed", "7", "--count", "100"],
    "inequalities": [
        "inequalities", "--seed", "0", "--count", "4",
        "--check", "nprop_monotone_in_N", "--check", "toeplitz_defect_bound", "--check", "exp_trig_estimate",
    ],
    "norm_ideal": ["norm", "--input", str(DATA / "ideal_element.json"), "--N", "2", "--M", "1"],
    "norm_hs": ["norm", "--input", str(DATA / "hs_element.json")],
    "fourier": ["fourier", "--input", str(DATA / "ideal_element.json")],
    "decompose_dphi": ["decompose", "--input", str(DATA / "dphi_mode1.json")],
    "decompose_sum": ["decompose", "--input", str(DATA / "sum_derivation.json")],
    "k0_unit": ["k0", "--input", str(DATA / "one_minus_vvstar.json")],
    "k0_residue": ["k0", "--input", str(DATA / "residue_projection.json")],
    "k0_winding": ["k0", "--input", str(DATA / "winding_two.json")],
    "report": ["report", "--count", "3", "--check", "nprop_monotone_in_N", "--depth-e", "3"],
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", list(CASES))
def test_golden(name, capsys):
    code, out, err = run(CASES[name], capsys)
    assert code == 0, err
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(out)
    assert out == path.read_text()
    assert "PASS" in err


def test_spec_examples(capsys):
    code, out, _ = run(CASES["k0_unit"], capsys)
    assert json.loads(out) == {"e": 1, "values": [1]}
    code, out, _ = run(CASES["decompose_dphi"], capsys)
    dec = json.loads(out)
    assert dec["phi"] == {"coeffs": [{"n": 1, "c": [1, 0]}]}
    assert dec["lambda"]["modes"] == [] and dec["residual"] == 0
    code, out, _ = run(CASES["verify_relations"], capsys)
    rep = json.loads(out)
    assert rep["all_pass"] and len(rep["identities"]) == 7
    code, out, _ = run(CASES["k0_winding"], capsys)
    assert json.loads(out) == {"winding": 2, "index": {"e": 1, "values": [-2]}}


def test_reports_are_byte_identical(capsys, tmp_path):
    argv = CASES["inequalities"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    out = tmp_path / "r.json"
    assert main(argv + ["--output", str(out)]) == 0
    assert out.read_text() == first


def test_failing_check_exit_code(capsys, monkeypatch):
    real = alg._term_product

    def corrupted(n, F, k, G):
        mode, sym = real(n, F, k, G)
        if n < 0 <= k:
            return mode, sym.alpha()
        return mode, sym

    monkeypatch.setattr(alg, "_term_product", corrupted)
    code, out, err = run(["verify-relations", "--count", "5"], capsys)
    assert code == 1 and "FAIL" in err
    assert json.loads(out)["all_pass"] is False


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"s": 2,\n "terms": [}')
    code, out, err = run(["norm", "--input", str(bad)], capsys)
    assert code == 2 and "line 2" in err and out == ""
    code, _, err = run(["norm"], capsys)
    assert code == 2 and "--input" in err
    code, _, err = run(["k0", "--input", str(DATA / "ideal_element.json")], capsys)
    assert code == 2 and "projection" in err
    code, _, err = run(["verify-relations", "--s", "1"], capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hsalgebra", "k0", "--input", str(DATA / "one_minus_vvstar.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"e": 1, "values": [1]}
