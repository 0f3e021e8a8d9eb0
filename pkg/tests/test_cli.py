"""End-to-end command-line runs: configs in, CSVs and manifest out."""

import json
from pathlib import Path

import pytest

from acdd.cli import main

BASE = {
    "command": "simulate",
    "seed": 7,
    "graph_B": {"generator": {"kind": "er", "n": 80, "p": 0.12,
                              "directed": False, "seed": 11}},
    "graph_R": {"same_as_B": True},
    "f": {"family": "polynomial", "coefficients": [0, 2, -2]},
    "g": {"family": "polynomial", "coefficients": [1, -1]},
    "params": {"initial": {"kind": "uniform-interval", "lo": 0.05, "hi": 0.95},
               "t_end": 60, "step": 0.01, "record_every": 100},
}


def _write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def _rows(path):
    lines = Path(path).read_text().strip().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_simulate_scenario_iv_converges_to_half(tmp_path):
    cfg = _write(tmp_path, BASE)
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    header, rows = _rows(out / "trajectory.csv")
    assert header == ["t", "mean_blue"]
    assert abs(float(rows[-1][1]) - 0.5) <= 1e-3
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"][0]["file"] == "trajectory.csv"
    assert len(manifest["outputs"][0]["sha256"]) == 64


def test_identical_runs_byte_identical(tmp_path):
    cfg = _write(tmp_path, BASE)
    for d in ("a", "b"):
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a/trajectory.csv").read_bytes() == \
        (tmp_path / "b/trajectory.csv").read_bytes()


def test_generation_failure_exit_code(tmp_path, capsys):
    cfg = dict(BASE)
    cfg["graph_B"] = {"generator": {"kind": "er", "n": 10, "p": 0.0,
                                    "directed": False, "seed": 1}}
    path = _write(tmp_path, cfg)
    code = main(["simulate", "--config", path, "--out", str(tmp_path / "o")])
    assert code == 3
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "GenerationFailed"


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = dict(BASE)
    cfg["bogus"] = True
    path = _write(tmp_path, cfg)
    assert main(["simulate", "--config", path, "--out", str(tmp_path / "o")]) == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "ConfigValidationError"


def test_command_mismatch_rejected(tmp_path):
    path = _write(tmp_path, BASE)
    assert main(["equilibria", "--config", path, "--out", str(tmp_path / "o")]) == 2


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["simulate", "--config", str(path),
                 "--out", str(tmp_path / "o")]) == 2


def test_equilibria_command(tmp_path):
    cfg = dict(BASE)
    cfg["command"] = "equilibria"
    cfg["f"] = {"family": "polynomial", "coefficients": [0, 4, -4]}
    cfg["g"] = {"family": "centered-quadratic-nu", "nu": 3.0}
    cfg.pop("params")
    path = _write(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["equilibria", "--config", path, "--out", str(out)]) == 0
    header, rows = _rows(out / "equilibria.csv")
    assert header == ["sigma", "residual", "verdict", "re_lambda1",
                      "im_lambda1", "method"]
    sigmas = [float(r[0]) for r in rows]
    assert any(abs(s - 0.7) <= 1e-8 for s in sigmas)


def test_threshold_command(tmp_path):
    cfg = dict(BASE)
    cfg["command"] = "threshold"
    cfg["graph_R"] = {"generator": {"kind": "er", "n": 80, "p": 0.12,
                                    "directed": False, "seed": 12}}
    cfg["f"] = {"family": "logistic", "coefficients": [-10, 5]}
    cfg["g"] = {"family": "polynomial", "coefficients": [2, -4, 2]}
    cfg["params"] = {"initial": {"kind": "constant", "sigma0": 0.6},
                     "t_end": 80, "step": 0.01, "record_every": 100,
                     "tau1": 0.5, "tau2": 0.5, "alpha": 1.0, "beta": 1.0}
    path = _write(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["threshold", "--config", path, "--out", str(out)]) == 0
    _, rows = _rows(out / "threshold.csv")
    outcome = next(r for r in rows if r[0] == "outcome")
    assert outcome[2] == "converged-to-1"


def test_perturb_estimate_command(tmp_path):
    cfg = dict(BASE)
    cfg["command"] = "perturb-estimate"
    cfg["graph_B"] = {"generator": {"kind": "er", "n": 120, "p": 0.08,
                                    "directed": False, "seed": 2}}
    cfg["f"] = {"family": "polynomial", "coefficients": [0, 4, -4]}
    cfg["g"] = {"family": "centered-quadratic-nu", "nu": 3.0}
    cfg["params"] = {"mode": "parameter", "d_nu": [0.01, 0.005]}
    path = _write(tmp_path, cfg)
    out = tmp_path / "out"
    assert main(["perturb-estimate", "--config", path, "--out", str(out)]) == 0
    _, rows = _rows(out / "perturb_estimate.csv")
    assert len(rows) == 2
    assert float(rows[1][5]) <= float(rows[0][5])  # error shrinks with d_nu


def test_figure_command_fig2_smoke(tmp_path):
    out = tmp_path / "fig"
    assert main(["figure", "--id", "fig2a", "--out", str(out),
                 "--scale", "desk", "--seed", "1"]) == 0
    files = {p.name for p in out.iterdir()}
    assert "manifest.json" in files
    assert any(name.endswith(".csv") for name in files)


def test_csv_floats_round_trip(tmp_path):
    cfg = _write(tmp_path, BASE)
    out = tmp_path / "out"
    main(["simulate", "--config", cfg, "--out", str(out)])
    _, rows = _rows(out / "trajectory.csv")
    for t, v in rows:
        # repr formatting must round-trip exactly
        assert repr(float(t)) == t and repr(float(v)) == v
