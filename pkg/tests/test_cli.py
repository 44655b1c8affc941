import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from abent import cli
from abent.hilbert import decode_matrix, decode_vector

GOLDEN = Path(__file__).parent / "golden"
SCENARIOS = ["singlet", "bell-phi-plus", "rotated-singlet", "phase-entangled", "dim3-degenerate"]


def run(argv, stdin=""):
    """Call ``cli.main`` in-process, returning (status, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin, sys.stdout, sys.stderr
    sys.stdin, sys.stdout, sys.stderr = io.StringIO(stdin), out, err
    try:
        status = cli.main(argv)
    finally:
        sys.stdin, sys.stdout, sys.stderr = old
    return status, out.getvalue(), err.getvalue()


def close(x, y, tol=1e-9, path="$"):
    if isinstance(x, dict):
        assert isinstance(y, dict) and set(x) == set(y), path
        for k in x:
            close(x[k], y[k], tol, f"{path}.{k}")
    elif isinstance(x, list):
        assert isinstance(y, list) and len(x) == len(y), path
        for i, (a, b) in enumerate(zip(x, y)):
            close(a, b, tol, f"{path}[{i}]")
    elif isinstance(x, float) or isinstance(y, float):
        assert not isinstance(x, bool) and not isinstance(y, bool), path
        assert math.isclose(x, y, abs_tol=tol), f"{path}: {x} != {y}"
    else:
        assert x == y, path


def analyze_scenario(name, *flags):
    status, spec, _ = run(["scenario", name])
    assert status == 0
    status, out, err = run(["analyze", *flags], spec)
    assert status == 0, err
    return json.loads(out)


@pytest.mark.parametrize("name", SCENARIOS)
def test_scenario_matches_golden(name):
    close(analyze_scenario(name), json.loads((GOLDEN / f"{name}.json").read_text()))


def test_singlet_report():
    r = analyze_scenario("singlet")
    assert r["ab_entangled"] is True
    assert abs(r["M_AB"] - 2) <= 1e-9
    assert r["epr"] == {"complete": True, "pairs": [[1.0, -1.0], [-1.0, 1.0]]}
    assert abs(r["two_qubit"]["standard_concurrence"] - 0.5) <= 1e-9


def test_rotated_singlet_report():
    r = analyze_scenario("rotated-singlet")
    assert r["ab_entangled"] is False
    assert abs(r["covariance"]) <= 1e-9
    for _, x in r["factorization"]["lambda"] + r["factorization"]["mu"]:
        assert abs(x - 1 / math.sqrt(2)) <= 1e-9


def test_phase_entangled_report():
    r = analyze_scenario("phase-entangled")
    assert r["ab_entangled"] is False
    assert abs(r["two_qubit"]["standard_concurrence"] - 0.5) <= 1e-9


def test_dim3_report_by_hand():
    r = analyze_scenario("dim3-degenerate")
    assert r["two_qubit"] is None
    assert r["M_AB"] == pytest.approx(1.0, abs=1e-12)
    assert r["covariance"] == pytest.approx(4 / 9, abs=1e-12)
    assert r["C_AB"] == pytest.approx(math.sqrt(2) / 3, abs=1e-12)
    assert r["amplitudes"][1][0] == 0.0


def test_scenario_specs():
    spec = json.loads(run(["scenario", "singlet"])[1])
    assert np.allclose(decode_vector(spec["state"]), [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0])
    assert np.allclose(decode_matrix(spec["observable_a"]), np.diag([1, 1, -1, -1]))
    assert np.allclose(decode_matrix(spec["observable_b"]), np.diag([1, -1, 1, -1]))
    rot = json.loads(run(["scenario", "rotated-singlet"])[1])
    minus_sx = -np.array([[0, 1], [1, 0]])
    assert np.allclose(decode_matrix(rot["observable_b"]), np.kron(np.eye(2), minus_sx))
    dim3 = json.loads(run(["scenario", "dim3-degenerate"])[1])
    assert len(dim3["state"]) == 3
    listing = json.loads(run(["scenario", "--list"])[1])
    assert sorted(listing) == sorted(SCENARIOS)


def test_unknown_scenario():
    status, out, err = run(["scenario", "nope"])
    assert status == 2 and out == ""
    assert json.loads(err)["error"] == "unknown_scenario"


def test_output_is_byte_identical():
    spec = run(["scenario", "dim3-degenerate"])[1]
    assert run(["analyze"], spec)[1] == run(["analyze"], spec)[1]
    assert run(["sweep", "--count", "5", "--seed", "3"])[1] == run(["sweep", "--count", "5", "--seed", "3"])[1]


def test_analyze_from_file_and_spectrum_form(tmp_path):
    spec = {
        "state": [1, [0, 1]],
        "observable_a": {"values": [1, -1], "projectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]},
        "observable_b": [[0, 1], [1, 0]],
        "tolerances": {"p": 1e-8},
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(spec))
    status, out, _ = run(["analyze", "--file", str(path)])
    r = json.loads(out)
    assert status == 0
    assert r["tolerances"]["p"] == 1e-8
    # ψ = (|0> + i|1>)/√2: either order gives P(+, +) = 1/2 · 1/2
    assert r["jpd"]["ab"]["entries"][0]["probability"] == pytest.approx(0.25, abs=1e-12)
    assert r["jpd"]["ba"]["entries"][0]["probability"] == pytest.approx(0.25, abs=1e-12)
    assert r["commuting"] is False and r["factorization"] is None


def test_direction_flag_swaps_roles():
    spec = json.dumps({"state": [1, 0], "observable_a": [[1, 0], [0, -1]], "observable_b": [[0, 1], [1, 0]]})
    ab = json.loads(run(["analyze"], spec)[1])
    ba = json.loads(run(["analyze", "--direction", "BA"], spec)[1])
    assert ab["direction"] == "ab" and ba["direction"] == "ba"
    assert ab["b_values"] == ba["a_values"]
    # with A = σx measured first, σz is undetermined for both σx outcomes
    assert ba["conditional_table"]["columns"][0]["conditionals"][0]["probability"] == pytest.approx(0.5)


def test_ftp_and_tables_in_report():
    spec = json.dumps({"state": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
                       "observable_a": [[1, 0], [0, -1]], "observable_b": [[0, 1], [1, 0]]})
    r = json.loads(run(["analyze"], spec)[1])
    plus = next(f for f in r["ftp"] if f["beta"] == 1.0)
    assert plus["interference"] == pytest.approx(0.5, abs=1e-12)
    cells = {(e["alpha"], e["beta"]): e["probability"] for e in r["jpd"]["ba"]["entries"]}
    assert cells[(1.0, 1.0)] == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("payload, code", [
    ("not json", "invalid_input"),
    ("[]", "invalid_input"),
    ('{"state": [1, 0]}', "invalid_input"),
    ('{"state": [0, 0], "observable_a": [[1, 0], [0, -1]], "observable_b": [[1, 0], [0, -1]]}', "zero_vector"),
    ('{"state": [1, 0], "observable_a": [[0, 1], [0, 0]], "observable_b": [[1, 0], [0, -1]]}', "not_hermitian"),
    ('{"state": [1, 0, 0], "observable_a": [[1, 0], [0, -1]], "observable_b": [[1, 0], [0, -1]]}',
     "dimension_mismatch"),
    ('{"state": [1, 0], "observable_a": [[1, 0], [0, -1]], "observable_b": [[1, 0], [0, -1]], "extra": 1}',
     "invalid_input"),
    ('{"state": [1, 0], "observable_a": [[1, 0], [0, -1]], "observable_b": [[1, 0], [0, -1]], "direction": "up"}',
     "invalid_input"),
    ('{"state": [1, 0], "observable_a": {"values": [1, -1], "projectors": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]},'
     ' "observable_b": [[1, 0], [0, -1]]}', "invalid_observable"),
])
def test_validation_errors(payload, code):
    status, out, err = run(["analyze"], payload)
    assert status == 2 and out == ""
    assert json.loads(err)["error"] == code


def test_sweep_examples():
    status, out, _ = run(["sweep", "--count", "1000", "--dim", "4", "--seed", "7"])
    r = json.loads(out)
    assert status == 0 and r["ok"] and r["counterexamples"] == []
    status, out, _ = run(["sweep", "--count", "1", "--dim", "2"])
    assert status == 0 and json.loads(out)["ok"]
    status, out, _ = run(["sweep", "--count", "100", "--dim", "6"])
    r = json.loads(out)
    assert status == 0
    assert r["checks"]["factorization_iff_disentangled"]["failed"] == 0 and r["checks"]["covariance_iff_entangled"]["failed"] == 0


@pytest.mark.parametrize("argv", [["sweep", "--count", "0"], ["sweep", "--dim", "1"], ["sweep", "--dim", "17"]])
def test_sweep_rejects_bad_arguments(argv):
    status, _, err = run(argv)
    assert status == 2 and json.loads(err)["error"] == "invalid_input"


def test_sweep_counterexample_exit_code(monkeypatch):
    from abent import sweep

    def broken(result, index, dim, rng, tol):
        result.record("factorization_iff_disentangled", False, {"sample": index})

    monkeypatch.setattr(sweep, "check_commuting_sample", broken)
    status, out, _ = run(["sweep", "--count", "2"])
    r = json.loads(out)
    assert status == 3 and not r["ok"] and len(r["counterexamples"]) == 2


def test_tolerance_flag():
    spec = run(["scenario", "singlet"])[1]
    r = json.loads(run(["--tolerance-p", "1e-6", "analyze"], spec)[1])
    assert r["tolerances"]["p"] == 1e-6
    r = json.loads(run(["analyze", "--tolerance-p", "1e-7"], spec)[1])
    assert r["tolerances"]["p"] == 1e-7
    status, _, err = run(["analyze", "--tolerance-p", "-1"], spec)
    assert status == 2


def test_console_entry_point_pipeline():
    spec = subprocess.run([sys.executable, "-m", "abent", "scenario", "singlet"],
                          capture_output=True, text=True, check=True).stdout
    done = subprocess.run([sys.executable, "-m", "abent", "analyze"], input=spec,
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert json.loads(done.stdout)["max_entangled"] is True
