"""End-to-end runs of the command-line front end, in process."""

import json

import pytest

from supermetric.algebra import AlgebraConfig
from supermetric.cli import main
from supermetric.matrices import SuperMatrix
from supermetric.sampling import (
    basis_for,
    make_rng,
    random_group_element,
    random_metric,
    standard_gamma,
)
from supermetric.serialization import (
    gamma_to_json,
    group_element_to_json,
    matrix_to_json,
)

RAT = AlgebraConfig(generator_count=4, coefficient_mode="rational")
ALG = {"generator_count": 4, "coefficient_mode": "rational"}


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_canonicalize_round_trip(tmp_path, capsys):
    G = random_metric(make_rng(5), RAT, 2, 2)
    path = _write(tmp_path, "metric.json",
                  {"algebra": ALG, "metric": matrix_to_json(G)})
    code, out, err = _run(capsys, ["canonicalize", path])
    assert code == 0 and err == ""
    report = json.loads(out)
    assert report["command"] == "canonicalize"
    assert report["mode"] == "rational"
    assert sorted(report["eta"], reverse=True) == report["eta"]
    assert set(report["eta"]) <= {1, -1}
    assert len(report["d_raw"]) == 2
    recs = report["reducibility"]
    assert all(set(r) == {"index", "ratio", "condition_met", "sign",
                          "scale_exact", "lambda"} for r in recs)
    if all(r["scale_exact"] for r in recs):
        assert report["residual"] == "0"


def test_canonicalize_out_file(tmp_path, capsys):
    G = random_metric(make_rng(5), RAT, 1, 2)
    out_path = tmp_path / "report.json"
    path = _write(tmp_path, "metric.json",
                  {"algebra": ALG, "metric": matrix_to_json(G)})
    code, out, _ = _run(capsys, ["canonicalize", path,
                                 "--out", str(out_path)])
    assert code == 0
    assert out == ""
    report = json.loads(out_path.read_text())
    assert report["command"] == "canonicalize"


def test_canonicalize_strict_gate_exit_3(tmp_path, capsys):
    # diagonal entry with soul twice its body trips the strict gate
    d = RAT.one() + RAT.term([1, 2], 2)
    z = RAT.zero()
    G = SuperMatrix.from_blocks(RAT, [[d]], [[]], [], [], "even")
    path = _write(tmp_path, "metric.json",
                  {"algebra": ALG, "metric": matrix_to_json(G)})
    code, out, err = _run(capsys, ["canonicalize", path, "--strict"])
    assert code == 3 and out == ""
    blob = json.loads(err)
    assert blob["kind"] == "ConvergenceViolation"
    # without the flag the same input reduces fine
    code2, out2, _ = _run(capsys, ["canonicalize", path])
    assert code2 == 0
    assert json.loads(out2)["body_reducible"] is False


def test_malformed_json_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"metric": [1, 2,')
    code, out, err = _run(capsys, ["canonicalize", str(path)])
    assert code == 2 and out == ""
    blob = json.loads(err)
    assert "malformed JSON" in blob["error"]
    assert blob["line"] >= 1 and blob["column"] >= 1


def test_missing_file_exit_2(capsys):
    code, _, err = _run(capsys, ["canonicalize", "/nonexistent/nope.json"])
    assert code == 2
    assert json.loads(err)["kind"] == "FileNotFound"


def test_invalid_metric_exit_2(tmp_path, capsys):
    payload = {"algebra": ALG,
               "metric": {"shape": {"m": 1, "n": 0}, "parity": "even",
                          "entries": ["not-a-number"]}}
    path = _write(tmp_path, "metric.json", payload)
    code, _, err = _run(capsys, ["canonicalize", path])
    assert code == 2
    assert json.loads(err)["exit_code"] == 2


def test_isometry_check_accepts_identity(tmp_path, capsys):
    gamma = standard_gamma(RAT, 1, 1, 2)
    N = SuperMatrix.identity(RAT, gamma.shape)
    path = _write(tmp_path, "iso.json",
                  {"algebra": ALG, "gamma": gamma_to_json(gamma),
                   "N": matrix_to_json(N)})
    code, out, _ = _run(capsys, ["isometry-check", path])
    assert code == 0
    report = json.loads(out)
    assert report["isometry"] is True
    assert report["residual"] == "0"
    assert report["lie_membership"]["formulations_agree"] is True


def test_isometry_check_rejects_scaling(tmp_path, capsys):
    gamma = standard_gamma(RAT, 1, 1, 2)
    N = SuperMatrix.identity(RAT, gamma.shape).scale(2)
    path = _write(tmp_path, "iso.json",
                  {"algebra": ALG, "gamma": gamma_to_json(gamma),
                   "N": matrix_to_json(N)})
    code, out, _ = _run(capsys, ["isometry-check", path])
    assert code == 0   # a clean "no" is still a successful run
    report = json.loads(out)
    assert report["isometry"] is False


def test_isometry_check_payload_validation(tmp_path, capsys):
    path = _write(tmp_path, "iso.json", {"algebra": ALG})
    code, _, err = _run(capsys, ["isometry-check", path])
    assert code == 2
    assert "gamma" in json.loads(err)["error"]


def test_lie_basis_dimensions(tmp_path, capsys):
    gamma = standard_gamma(RAT, 2, 1, 2)
    path = _write(tmp_path, "basis.json",
                  {"algebra": ALG, "gamma": gamma_to_json(gamma)})
    code, out, _ = _run(capsys, ["lie-basis", path])
    assert code == 0
    report = json.loads(out)
    m, n = 3, 2
    assert report["dims"]["g0"] == m * (m - 1) // 2 + n * (n + 1) // 2
    assert report["dims"]["g1"] == m * n
    assert len(report["g0"]) == report["dims"]["g0"]
    assert len(report["hJ"]) == report["dims"]["hJ"]
    for item in report["hJ"][:20]:
        assert set(item) == {"index", "position"}
        assert item["index"] == sorted(item["index"])


def test_group_op_rational_exact(tmp_path, capsys):
    basis = basis_for(RAT, 1, 1, 2)
    rng = make_rng(12)
    h1 = random_group_element(rng, basis)
    h2 = random_group_element(rng, basis)
    path = _write(tmp_path, "op.json", {
        "algebra": ALG,
        "gamma": gamma_to_json(basis.gamma),
        "h1": group_element_to_json(h1),
        "h2": group_element_to_json(h2),
    })
    code, out, _ = _run(capsys, ["group-op", path])
    assert code == 0
    report = json.loads(out)
    assert report["isometry"] is True
    assert report["residuals"]["isometry"] == "0"
    assert report["residuals"]["embedding_homomorphism"] == "0"
    assert report["product"]["n_part"]["parity"] == "even"


def test_mode_flag_overrides_payload(tmp_path, capsys):
    G = random_metric(make_rng(5), RAT, 1, 0)
    path = _write(tmp_path, "metric.json",
                  {"algebra": ALG, "metric": matrix_to_json(G)})
    code, out, _ = _run(capsys, ["canonicalize", path, "--mode", "float64"])
    assert code == 0
    assert json.loads(out)["mode"] == "float64"


def test_verify_passes_both_modes(tmp_path, capsys):
    for mode in ("rational", "float64"):
        code, out, _ = _run(capsys, ["verify", "--mode", mode,
                                     "--seed", "7"])
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "pass"
        assert report["mode"] == mode
        assert all(s["status"] == "pass" for s in report["sections"])


def test_verify_byte_deterministic(capsys):
    argv = ["verify", "--mode", "rational", "--seed", "42"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv)
    assert out1 == out2
    assert out1.endswith("\n")


def test_verify_config_file_sets_shape(tmp_path, capsys):
    cfg_path = _write(tmp_path, "cfg.json",
                      {"generator_count": 4, "coefficient_mode": "rational",
                       "m": 3, "n": 2})
    code, out, _ = _run(capsys, ["verify", "--config", cfg_path])
    assert code == 0
    report = json.loads(out)
    assert report["shape"] == {"m": 3, "n": 2}
    assert report["status"] == "pass"
