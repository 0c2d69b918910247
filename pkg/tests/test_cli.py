import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from extlaplace.cli import run

SPECS = Path(__file__).resolve().parent.parent / "specs"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_faxen_gamma_one(capsys):
    code, doc, _ = call(capsys, "faxen", "--alpha", "0.5", "--beta", "1,0", "--x", "0,0")
    assert code == 0
    assert doc["value"] == pytest.approx([1.0, 0.0], abs=1e-14)
    assert {"value", "method", "est_error"} <= set(doc)


def test_coeffs_leading_entry(capsys):
    code, doc, _ = call(capsys, "coeffs", "--spec", str(SPECS / "anger.json"), "--order", "4")
    assert code == 0
    assert len(doc["f"]) == 4
    assert doc["f"][0][0] == pytest.approx([6 ** (1 / 3) / 3, 0.0], abs=1e-13)
    # odd rows vanish for this integrand
    assert all(abs(v) < 1e-14 for pair in doc["f"][1] + doc["f"][3] for v in pair)


def test_anger_example_verify(capsys):
    code, doc, _ = call(capsys, "example", "anger", "--rho", "10000", "--tau", "0.5", "--order", "2", "--verify")
    assert code == 0
    assert doc["rel_error"] <= 5e-7
    assert doc["fitted_order"] > 1.5
    assert doc["warnings"] == []


def test_chu_example_on_other_sheet(capsys):
    b = f"--b={1e4 * math.cos(11 * math.pi / 8)},{1e4 * math.sin(11 * math.pi / 8)}"
    code, doc, _ = call(capsys, "example", "chu", b, "--sheet", "1", "--verify")
    assert code == 0
    assert doc["theta"] == pytest.approx(11 * math.pi / 8)
    assert doc["rel_error"] < 1e-6


def test_expand_plain_and_regrouped_matched_agree(capsys):
    spec = str(SPECS / "chu.json")
    _, a, _ = call(capsys, "expand", "--spec", spec, "--z", "400", "--order", "3")
    _, b, _ = call(capsys, "expand", "--spec", spec, "--z", "400", "--order", "3", "--corollary2", "--matched")
    assert a["value"] == pytest.approx(b["value"], rel=1e-10)
    assert len(a["terms"]) == len(a["partial_sums"]) == 3
    assert math.isfinite(a["heuristic_error"])


def test_quad_on_shipped_contour(capsys):
    params = json.dumps({"tau": 0.5, "big": 1000.0})
    code, doc, _ = call(capsys, "quad", "--integrand", "builtin:anger", "--contour", "shipped:anger:0",
                        "--params", params, "--tol", "1e-12")
    assert code == 0
    _, ex, _ = call(capsys, "example", "anger", "--rho", "1000", "--tau", "0.5", "--order", "3")
    assert ex["value"] == pytest.approx(doc["value"], rel=1e-7)


def test_quad_numerical_failure_exit_one(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"nodes": [[0, 0], [0, 1]], "start_singularity": [0, 0],
                                "tail": {"type": "ray", "dir": [0, 1]}}))
    code, doc, _ = call(capsys, "quad", "--integrand", "builtin:faxen", "--contour", str(path),
                        "--params", json.dumps({"alpha": 0.5, "beta": 1, "x": 0}))
    assert code == 1
    assert doc["error"] == "numerical" and "levels" in doc


@pytest.mark.parametrize("argv", [
    ["faxen", "--alpha", "0.5", "--beta", "1,0"],
    ["faxen", "--alpha", "1.5", "--beta", "1", "--x", "0"],
    ["faxen", "--alpha", "0.5", "--beta", "a,b", "--x", "0"],
    ["quad", "--integrand", "builtin:anger", "--contour", "shipped:anger:7", "--params", "{}"],
    ["quad", "--integrand", "builtin:anger", "--contour", "shipped:anger:0", "--params", "{oops"],
    ["coeffs", "--spec", "/nonexistent/spec.json"],
    ["frobnicate"],
])
def test_invalid_input_exit_two(capsys, argv):
    code, doc, _ = call(capsys, *argv)
    assert code == 2
    assert doc["error"] == "validation" and doc["message"]


def test_schema_error_reports_path(capsys, tmp_path):
    bad = json.loads((SPECS / "anger.json").read_text())
    bad["p_coeffs"][0] = "x"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad))
    code, doc, _ = call(capsys, "coeffs", "--spec", str(f))
    assert code == 2 and doc["path"] == "p_coeffs/0"


def test_output_is_byte_identical(capsys):
    argv = ["expand", "--spec", str(SPECS / "anger.json"), "--z=500,100", "--order", "4"]
    _, _, first = call(capsys, *argv)
    _, _, second = call(capsys, *argv)
    assert first == second


def test_module_entry_point():
    argv = [sys.executable, "-m", "extlaplace", "faxen", "--alpha", "0.5", "--beta", "1", "--x", "1"]
    a = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["method"] == "series"


def test_selftest_exit_code_follows_results(capsys):
    code = run(["selftest", "--quick"])
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert code == (0 if doc["passed"] else 1)
    assert len(captured.err.strip().splitlines()) == len(doc["criteria"])
    failing = [c["criterion"] for c in doc["criteria"] if not c["passed"]]
    assert failing == ["3"]
