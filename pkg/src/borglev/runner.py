"""Experiment orchestration: validated JSON configs in, CSV/JSON artifacts out.

Every run writes a manifest with the config hash, library versions and
per-stage timing; identical configs and seeds produce identical CSV/JSON
payload bytes.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .cache import cache_spectral
from .dtn import dtn_difference_series, dtn_direct, operator_l2_norm
from .errors import ValidationError
from .grid import build_grid
from .lemmas import LemmaQuery, check_lemma1, check_lemma2, check_lemma3
from .io import (
    save_dtn,
    save_fourier_samples,
    save_json,
    save_rows_csv,
    save_spectral,
)
from .potentials import from_spec, scale, zero
from .probe import (
    FourierSample,
    probe_remainder_decay,
    reconstruct_potential,
    verify_identity_3_1,
    make_geometry,
)
from .spectral import align_traces, solve_eigen, truncate_data, weyl_validate
from .stability import asymptotic_noise_experiment, holder_experiment

KINDS = ("eig", "weyl", "dtn", "identity", "recover", "stability",
         "asympt-noise", "lemmas")

_ALLOWED = {
    "eig": {"kind", "grid", "seed", "potential", "K"},
    "weyl": {"kind", "grid", "seed", "potential", "K", "m", "eps"},
    "dtn": {"kind", "grid", "seed", "potential", "potential2", "lambda", "K"},
    "identity": {"kind", "grid", "seed", "potential", "xi", "tau_list"},
    "recover": {"kind", "grid", "seed", "potential", "tau_list",
                "cutoff_multiplier", "source", "K", "N_drop"},
    "stability": {"kind", "grid", "seed", "potential", "t_list", "N", "m", "K"},
    "asympt-noise": {"kind", "grid", "seed", "potential", "potential2",
                     "delta_list", "A", "alpha", "m", "K", "tau",
                     "cutoff_multiplier"},
    "lemmas": {"kind", "seed", "sweeps"},
}


def load_config(path, seed_override=None) -> dict:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    kind = cfg.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"kind must be one of {KINDS}, got {kind!r}")
    unknown = set(cfg) - _ALLOWED[kind]
    if unknown:
        raise ValidationError(f"unknown config keys for {kind}: {sorted(unknown)}")
    if seed_override is not None:
        cfg["seed"] = int(seed_override)
    return cfg


def _grid_of(cfg):
    g = cfg.get("grid")
    if not isinstance(g, dict) or set(g) != {"lx", "ly", "nx", "ny"}:
        raise ValidationError("grid must be an object {lx, ly, nx, ny}")
    return build_grid(g["lx"], g["ly"], g["nx"], g["ny"])


def _effective_spec(spec, seed):
    """Resolve the seed into a bare ["random"] spec so it keys the cache."""
    if isinstance(spec, (list, tuple)) and spec and spec[0] == "random" \
            and len(spec) == 1 and seed is not None:
        return ["random", int(seed)]
    return spec


def _potential(grid, spec, seed):
    return from_spec(grid, _effective_spec(spec, seed))


class _Stages:
    def __init__(self):
        self.rows = []

    def run(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.rows.append({"name": name, "seconds": time.perf_counter() - t0})
        return out


def _validate(cfg):
    """Full field validation before any compute or output."""
    kind = cfg["kind"]
    seed = cfg.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    if kind == "lemmas":
        sweeps = cfg.get("sweeps")
        if not isinstance(sweeps, list) or not sweeps:
            raise ValidationError("lemmas config needs a nonempty sweeps list")
        return
    grid = _grid_of(cfg)
    _potential(grid, cfg.get("potential"), seed)
    if "potential2" in cfg:
        _potential(grid, cfg["potential2"], seed)
    for key in ("K", "N", "N_drop"):
        if key in cfg and (not isinstance(cfg[key], int) or cfg[key] < 0):
            raise ValidationError(f"{key} must be a nonnegative integer")
    if kind in ("eig", "weyl", "stability", "asympt-noise") and "K" not in cfg:
        raise ValidationError(f"{kind} config requires K")
    if kind == "dtn":
        lam = cfg.get("lambda")
        if not (isinstance(lam, list) and len(lam) == 2):
            raise ValidationError("lambda must be [re, im]")
    for key in ("tau_list", "t_list", "delta_list"):
        if key in cfg:
            v = cfg[key]
            if not (isinstance(v, list) and v
                    and all(isinstance(x, (int, float)) for x in v)):
                raise ValidationError(f"{key} must be a nonempty number list")
    if kind == "identity":
        xi = cfg.get("xi")
        if not (isinstance(xi, list) and len(xi) == 2):
            raise ValidationError("xi must be [xi1, xi2]")


def run(config_path, out_dir, threads: int = 1, seed=None) -> dict:
    """Execute one experiment; returns the manifest dictionary."""
    cfg = load_config(config_path, seed_override=seed)
    _validate(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stages = _Stages()
    outputs: list[Path] = []
    manifest = {
        "config_hash": hashlib.sha256(
            Path(config_path).read_bytes()).hexdigest(),
        "versions": {"borglev": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__},
        "incomplete": True,
        "stages": stages.rows,
        "outputs": [],
    }
    t_start = time.perf_counter()
    try:
        outputs = _dispatch(cfg, out, stages, threads)
        manifest["incomplete"] = False
    finally:
        manifest["wall_time"] = time.perf_counter() - t_start
        manifest["outputs"] = sorted(p.name for p in outputs)
        save_json(manifest, out / "manifest.json")
    return manifest


def _dispatch(cfg, out, stages, threads):
    kind = cfg["kind"]
    seed = cfg.get("seed")
    if kind == "lemmas":
        return _run_lemmas(cfg, out, stages, threads)
    grid = _grid_of(cfg)
    q = stages.run("potential",
                   lambda: _potential(grid, cfg["potential"], seed))

    if kind == "eig":
        K = int(cfg["K"])
        spec = _effective_spec(cfg["potential"], seed)
        _, sd = stages.run(
            "solve", lambda: cache_spectral(spec, grid, K))
        return stages.run("write", lambda: save_spectral(sd, out / "spectrum"))

    if kind == "weyl":
        K = int(cfg["K"])
        sd = stages.run("solve", lambda: solve_eigen(q, grid, K))
        rep = stages.run("weyl", lambda: weyl_validate(
            sd, m=int(cfg.get("m", 2)), eps=float(cfg.get("eps", 0.25))))
        return [save_json(vars(rep), out / "weyl.json")]

    if kind == "dtn":
        lam = complex(*cfg["lambda"])
        mat = stages.run("direct", lambda: dtn_direct(q, lam, grid))
        outputs = save_dtn(mat, out / "dtn_direct")
        summary = {"lambda": [lam.real, lam.imag],
                   "symmetry_residual": mat.symmetry_residual()}
        if "potential2" in cfg:
            q2 = _potential(grid, cfg["potential2"], seed)
            K = int(cfg.get("K", 200))
            # solve past K so a split degenerate cluster at the truncation
            # boundary is aligned before being trimmed away
            sd1 = stages.run("solve1", lambda: solve_eigen(q, grid, K + 8))
            sd2 = stages.run("solve2", lambda: solve_eigen(q2, grid, K + 8))
            sd1, sd2 = align_traces(sd1, sd2)
            sd1, sd2 = truncate_data(sd1, K), truncate_data(sd2, K)
            diff = stages.run(
                "series", lambda: dtn_difference_series(sd1, sd2, lam))
            outputs += save_dtn(diff, out / "dtn_difference_series")
            direct2 = dtn_direct(q2, lam, grid)
            num = operator_l2_norm(
                diff.entries - (mat.entries - direct2.entries), grid)
            den = operator_l2_norm(mat.entries - direct2.entries, grid)
            summary["difference_relative_error"] = num / max(den, 1e-300)
            summary["K"] = K
        outputs.append(save_json(summary, out / "dtn_summary.json"))
        return outputs

    if kind == "identity":
        xi = np.asarray(cfg["xi"], dtype=float)
        taus = [float(t) for t in cfg["tau_list"]]
        rows = []
        for tau in taus:
            rep = stages.run(f"identity tau={tau}", lambda t=tau:
                             verify_identity_3_1(q, make_geometry(xi, t), grid))
            rows.append({"tau": tau, "residual": rep["residual"],
                         "remainder_abs": abs(rep["remainder_term"]),
                         "lhs_re": rep["lhs"].real, "lhs_im": rep["lhs"].imag})
        dec = stages.run("remainder fit",
                         lambda: probe_remainder_decay(q, xi, taus, grid))
        outputs = [save_rows_csv(
            rows, ["tau", "residual", "remainder_abs", "lhs_re", "lhs_im"],
            out / "identity.csv")]
        outputs.append(save_json(
            {"remainder_slope": dec["slope"], "predicted": dec["predicted"],
             "xi": list(xi)}, out / "identity_summary.json"))
        return outputs

    if kind == "recover":
        taus = [float(t) for t in cfg["tau_list"]]
        mult = float(cfg.get("cutoff_multiplier", 3.0))
        source = cfg.get("source", "direct")
        sd = sd0 = None
        if source == "spectral":
            K = int(cfg.get("K", 200))
            sd = stages.run("solve", lambda: solve_eigen(q, grid, K + 8))
            sd0 = stages.run("solve0",
                             lambda: solve_eigen(zero(grid), grid, K + 8))
            sd, sd0 = align_traces(sd, sd0)
            sd, sd0 = truncate_data(sd, K), truncate_data(sd0, K)
        reports, samples = [], []
        for tau in taus:
            est, rep = stages.run(f"reconstruct tau={tau}", lambda t=tau:
                                  reconstruct_potential(
                                      q, t, grid, source=source,
                                      cutoff_multiplier=mult, sd=sd, sd0=sd0,
                                      N_drop=int(cfg.get("N_drop", 0))))
            samples += rep.pop("samples")
            reports.append(rep)
        outputs = [save_fourier_samples(samples, out / "fourier_samples.csv")]
        outputs.append(save_json({"reports": reports},
                                 out / "reconstruction.json"))
        return outputs

    if kind == "stability":
        K = int(cfg["K"])
        ts = [float(t) for t in cfg["t_list"]]
        family = [(scale(q, t), zero(grid)) for t in ts]
        rep = stages.run("holder", lambda: holder_experiment(
            family, N=int(cfg.get("N", 0)), m=int(cfg.get("m", 2)),
            grid=grid, K=K))
        outputs = [save_rows_csv(
            rep["rows"], ["pair_id", "delta0", "delta1", "delta", "l2_diff"],
            out / "stability.csv")]
        summary = {k: rep[k] for k in
                   ("gamma_paper", "gamma_emp", "C_fit", "N", "m", "K",
                    "degenerate")}
        summary["tail_bound"] = max(r["tail_bound"] for r in rep["rows"])
        outputs.append(save_json(summary, out / "stability_summary.json"))
        return outputs

    if kind == "asympt-noise":
        q2 = _potential(grid, cfg.get("potential2", "zero"), seed)
        rep = stages.run("noise sweep", lambda: asymptotic_noise_experiment(
            q, q2, [float(d) for d in cfg["delta_list"]],
            A=float(cfg["A"]), alpha=float(cfg["alpha"]),
            m=int(cfg.get("m", 2)), grid=grid, K=int(cfg["K"]),
            tau=float(cfg.get("tau", 10.0)),
            cutoff_multiplier=float(cfg.get("cutoff_multiplier", 10.0))))
        outputs = [save_rows_csv(rep["rows"],
                                 ["delta", "N_of_delta", "l2_error"],
                                 out / "noise_sweep.csv")]
        outputs.append(save_json(
            {k: rep[k] for k in ("baseline_error", "dropped_pairs_error",
                                 "N_drop_test", "gamma_fit", "alpha", "A",
                                 "m", "K", "tau")},
            out / "noise_summary.json"))
        return outputs

    raise ValidationError(f"unhandled kind {kind!r}")  # unreachable


def _one_sweep(sweep):
    allowed = {"lemma", "mu", "nu", "b", "tau_min", "tau_max", "n_tau",
               "t_min", "t_max"}
    unknown = set(sweep) - allowed
    if unknown:
        raise ValidationError(f"unknown sweep keys: {sorted(unknown)}")
    lemma = sweep.get("lemma")
    taus = np.geomspace(float(sweep.get("tau_min", 8.0)),
                        float(sweep.get("tau_max", 256.0)),
                        int(sweep.get("n_tau", 13)))
    if lemma == 1:
        rep = check_lemma1(LemmaQuery(mu=float(sweep["mu"]),
                                      nu=float(sweep["nu"])), taus)
        mu, nu = float(sweep["mu"]), float(sweep["nu"])
        b = (mu + 1.0) - 1.0
    elif lemma == 2:
        b, nu = float(sweep["b"]), float(sweep["nu"])
        mu = b  # n=2: b = mu
        rep = check_lemma2(b, nu, taus)
    elif lemma == 3:
        mu, nu = float(sweep["mu"]), float(sweep["nu"])
        b = mu
        ts = np.geomspace(float(sweep.get("t_min", 10.0)),
                          float(sweep.get("t_max", 1000.0)), 9)
        rep = check_lemma3(LemmaQuery(mu=mu, nu=nu), [-t for t in ts],
                           K_cut=100_000)
    else:
        raise ValidationError(f"lemma must be 1, 2 or 3, got {lemma!r}")
    rows = []
    xs = rep.extras.get("taus", rep.extras.get("scales", []))
    vals = rep.extras.get("values", [])
    for x, v in zip(np.asarray(xs), np.asarray(vals)):
        rows.append({"mu": mu, "nu": nu, "b": b, "regime": rep.regime,
                     "tau": x, "value": v,
                     "predicted_slope": rep.predicted_slope,
                     "fitted_slope": rep.fitted_slope, "pass": rep.passes})
    return rows


def _run_lemmas(cfg, out, stages, threads):
    sweeps = cfg.get("sweeps")
    if not isinstance(sweeps, list) or not sweeps:
        raise ValidationError("lemmas config needs a nonempty sweeps list")
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        all_rows = stages.run(
            "sweeps", lambda: [r for rows in pool.map(_one_sweep, sweeps)
                               for r in rows])
    return [save_rows_csv(
        all_rows,
        ["mu", "nu", "b", "regime", "tau", "value", "predicted_slope",
         "fitted_slope", "pass"],
        out / "lemma_sweeps.csv")]
