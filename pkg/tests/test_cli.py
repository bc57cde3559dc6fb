"""End-to-end runner/CLI behavior: artifacts, exit codes, reproducibility."""

import json

import pytest

from borglev.cli import main
from borglev.errors import ValidationError
from borglev.runner import load_config, run

GRID = {"lx": 1.0, "ly": 1.0, "nx": 12, "ny": 12}


def write_cfg(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_eig_run_artifacts_and_manifest(tmp_path):
    cfg = write_cfg(tmp_path, "eig.json",
                    {"kind": "eig", "grid": GRID, "potential": "zero", "K": 30})
    out = tmp_path / "out"
    assert main(["eig", "--config", cfg, "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"manifest.json", "spectrum.json", "spectrum.csv"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["incomplete"] is False
    assert set(manifest) == {"config_hash", "incomplete", "outputs",
                             "stages", "versions", "wall_time"}
    assert "spectrum.csv" in " ".join(manifest["outputs"])


def test_runs_are_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, "eig.json",
                    {"kind": "eig", "grid": GRID, "potential": "zero", "K": 30})
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["eig", "--config", cfg, "--out", str(out1)])
    main(["eig", "--config", cfg, "--out", str(out2)])
    assert (out1 / "spectrum.csv").read_bytes() == (out2 / "spectrum.csv").read_bytes()
    assert (out1 / "spectrum.json").read_bytes() == (out2 / "spectrum.json").read_bytes()


def test_invalid_config_exits_2_without_outputs(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "bad.json",
                    {"kind": "eig", "grid": dict(GRID, nx=-4),
                     "potential": "zero", "K": 30})
    out = tmp_path / "out"
    assert main(["eig", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists()
    assert "invalid input" in capsys.readouterr().err


def test_kind_mismatch_exits_2(tmp_path):
    cfg = write_cfg(tmp_path, "eig.json",
                    {"kind": "eig", "grid": GRID, "potential": "zero", "K": 30})
    assert main(["weyl", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_unknown_config_key_rejected(tmp_path):
    cfg = write_cfg(tmp_path, "eig.json",
                    {"kind": "eig", "grid": GRID, "potential": "zero",
                     "K": 30, "typo_key": 1})
    with pytest.raises(ValidationError):
        load_config(cfg)


def test_missing_config_exits_2(tmp_path):
    assert main(["eig", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")]) == 2


def test_seed_override(tmp_path):
    cfg = write_cfg(tmp_path, "eig.json",
                    {"kind": "eig", "grid": GRID,
                     "potential": ["random"], "K": 30})
    o1, o2, o3 = (tmp_path / n for n in ("s1", "s2", "s3"))
    main(["eig", "--config", cfg, "--out", str(o1), "--seed", "1"])
    main(["eig", "--config", cfg, "--out", str(o2), "--seed", "1"])
    main(["eig", "--config", cfg, "--out", str(o3), "--seed", "2"])
    b1 = (o1 / "spectrum.csv").read_bytes()
    assert b1 == (o2 / "spectrum.csv").read_bytes()
    assert b1 != (o3 / "spectrum.csv").read_bytes()


def test_weyl_kind(tmp_path):
    cfg = write_cfg(tmp_path, "w.json",
                    {"kind": "weyl", "grid": dict(GRID, nx=20, ny=20),
                     "potential": "zero", "K": 60})
    out = tmp_path / "out"
    assert main(["weyl", "--config", cfg, "--out", str(out)]) == 0
    rep = json.loads((out / "weyl.json").read_text())
    assert rep["c_star"] > 0 and rep["trace_constant"] > 0


def test_dtn_kind(tmp_path):
    cfg = write_cfg(tmp_path, "d.json",
                    {"kind": "dtn", "grid": GRID,
                     "potential": ["mode", 1, 1, 0.5], "potential2": "zero",
                     "lambda": [15.0, 8.0], "K": 60})
    out = tmp_path / "out"
    assert main(["dtn", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "dtn_summary.json").read_text())
    assert summary["symmetry_residual"] < 1e-12
    assert summary["difference_relative_error"] < 0.3
    assert (out / "dtn_direct.csv").exists()
    assert (out / "dtn_difference_series.csv").exists()


def test_identity_kind(tmp_path):
    cfg = write_cfg(tmp_path, "i.json",
                    {"kind": "identity", "grid": dict(GRID, nx=20, ny=20),
                     "potential": ["gaussian", [0.5, 0.5], 0.12, 2.0],
                     "xi": [3.14159, 0.0], "tau_list": [3.0, 4.0, 6.0]})
    out = tmp_path / "out"
    assert main(["identity", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "identity_summary.json").read_text())
    assert summary["remainder_slope"] < 0
    assert (out / "identity.csv").read_text().startswith(
        "tau,residual,remainder_abs,")


def test_recover_kind(tmp_path):
    cfg = write_cfg(tmp_path, "r.json",
                    {"kind": "recover", "grid": dict(GRID, nx=20, ny=20),
                     "potential": ["mode", 2, 2, 1.0],
                     "tau_list": [6.0, 10.0], "cutoff_multiplier": 8.0})
    out = tmp_path / "out"
    assert main(["recover", "--config", cfg, "--out", str(out)]) == 0
    rec = json.loads((out / "reconstruction.json").read_text())
    errs = [r["l2_error"] for r in rec["reports"]]
    assert len(errs) == 2 and all(e > 0 for e in errs)
    assert (out / "fourier_samples.csv").exists()


def test_stability_kind(tmp_path):
    cfg = write_cfg(tmp_path, "s.json",
                    {"kind": "stability", "grid": dict(GRID, nx=16, ny=16),
                     "potential": ["mode", 2, 3, 1.0],
                     "t_list": [0.05, 0.1, 0.2, 0.4, 0.8], "K": 60})
    out = tmp_path / "out"
    assert main(["stability", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "stability_summary.json").read_text())
    assert summary["gamma_paper"] == pytest.approx(1.0 / 94.0)
    assert (out / "stability.csv").exists()


def test_noise_kind(tmp_path):
    cfg = write_cfg(tmp_path, "n.json",
                    {"kind": "asympt-noise", "grid": dict(GRID, nx=16, ny=16),
                     "potential": ["mode", 1, 1, 1.0],
                     "delta_list": [0.1, 0.01], "A": 1.0, "alpha": 2.0,
                     "K": 60, "tau": 6.0, "cutoff_multiplier": 6.0})
    out = tmp_path / "out"
    assert main(["asympt-noise", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "noise_summary.json").read_text())
    assert summary["baseline_error"] > 0
    assert (out / "noise_sweep.csv").exists()


def test_lemmas_kind_with_threads(tmp_path):
    cfg = write_cfg(tmp_path, "l.json",
                    {"kind": "lemmas", "sweeps": [
                        {"lemma": 2, "b": 0.0, "nu": 2.0, "tau_min": 8.0,
                         "tau_max": 128.0, "n_tau": 5},
                        {"lemma": 3, "mu": -2.0, "nu": 1.0},
                    ]})
    out = tmp_path / "out"
    assert main(["lemmas", "--config", cfg, "--out", str(out),
                 "--threads", "2"]) == 0
    lines = (out / "lemma_sweeps.csv").read_text().splitlines()
    assert lines[0] == ("mu,nu,b,regime,tau,value,predicted_slope,"
                       "fitted_slope,pass")
    assert all(line.endswith("true") for line in lines[1:])


def test_numerical_failure_exits_3(tmp_path, capsys, monkeypatch):
    cfg = write_cfg(tmp_path, "e.json",
                    {"kind": "eig", "grid": GRID, "potential": "zero", "K": 30})
    from borglev import runner
    from borglev.errors import EigensolverError

    def boom(*a, **k):
        raise EigensolverError("synthetic failure")

    monkeypatch.setattr(runner, "cache_spectral", boom)
    out = tmp_path / "out"
    assert main(["eig", "--config", cfg, "--out", str(out)]) == 3
    assert "numerical failure" in capsys.readouterr().err
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["incomplete"] is True
