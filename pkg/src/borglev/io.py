"""File formats: CSV payloads with JSON headers/metadata.

All writers format floats with repr-faithful precision so identical inputs
produce identical bytes (the reproducibility contract of the runner).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .grid import GridSpec
from .spectral import SpectralData

_FMT = "%.17g"


def _f(x) -> str:
    return _FMT % float(x)


def save_spectral(sd: SpectralData, prefix) -> list[Path]:
    """JSON header + CSV body (k, lambda_k, trace re/im interleaved)."""
    prefix = Path(prefix)
    header = {
        "potential_id": sd.potential_id,
        "K": int(sd.K),
        "grid": {"lx": sd.grid.lx, "ly": sd.grid.ly,
                 "nx": sd.grid.nx, "ny": sd.grid.ny},
    }
    jpath = prefix.with_suffix(".json")
    cpath = prefix.with_suffix(".csv")
    jpath.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    with open(cpath, "w", newline="") as fh:
        w = csv.writer(fh)
        cols = ["k", "lambda"]
        for b in range(sd.grid.n_bd):
            cols += [f"trace{b}_re", f"trace{b}_im"]
        w.writerow(cols)
        tr = sd.traces.astype(complex)
        for k in range(sd.K):
            row = [str(k + 1), _f(sd.eigenvalues[k])]
            for b in range(sd.grid.n_bd):
                row += [_f(tr[k, b].real), _f(tr[k, b].imag)]
            w.writerow(row)
    return [jpath, cpath]


def load_spectral(prefix) -> SpectralData:
    prefix = Path(prefix)
    header = json.loads(prefix.with_suffix(".json").read_text())
    g = header["grid"]
    grid = GridSpec(float(g["lx"]), float(g["ly"]), int(g["nx"]), int(g["ny"]))
    K = int(header["K"])
    lams = np.empty(K)
    traces = np.empty((K, grid.n_bd), dtype=complex)
    with open(prefix.with_suffix(".csv"), newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    if len(rows) != K:
        raise ValidationError(f"spectral CSV has {len(rows)} rows, header says {K}")
    for i, row in enumerate(rows):
        lams[i] = float(row[1])
        vals = np.array(row[2:], dtype=float)
        traces[i] = vals[0::2] + 1j * vals[1::2]
    if np.max(np.abs(traces.imag)) == 0.0:
        traces = traces.real
    return SpectralData(eigenvalues=lams, traces=traces, grid=grid,
                        potential_id=header["potential_id"])


def save_dtn(mat, prefix) -> list[Path]:
    """Entries CSV (row, col, re, im) + JSON metadata."""
    prefix = Path(prefix)
    meta = {
        "lambda": [mat.lam.real, mat.lam.imag],
        "kind": mat.kind,
        "potential_id": mat.potential_id,
        "K": mat.meta.get("K"),
        "N": mat.meta.get("N", mat.meta.get("N_shift")),
        "tail_bound": mat.meta.get("tail_bound"),
        "grid": {"lx": mat.grid.lx, "ly": mat.grid.ly,
                 "nx": mat.grid.nx, "ny": mat.grid.ny},
    }
    jpath = prefix.with_suffix(".json")
    cpath = prefix.with_suffix(".csv")
    jpath.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    with open(cpath, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "col", "re", "im"])
        n = mat.entries.shape[0]
        for i in range(n):
            for j in range(n):
                z = mat.entries[i, j]
                w.writerow([str(i), str(j), _f(z.real), _f(z.imag)])
    return [jpath, cpath]


def load_dtn_entries(prefix) -> np.ndarray:
    prefix = Path(prefix)
    with open(prefix.with_suffix(".csv"), newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    n = int(np.sqrt(len(rows)))
    M = np.empty((n, n), dtype=complex)
    for r, c, re, im in rows:
        M[int(r), int(c)] = float(re) + 1j * float(im)
    return M


def save_fourier_samples(samples, path) -> Path:
    """CSV (xi1, xi2, tau, re, im, source)."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["xi1", "xi2", "tau", "re", "im", "source"])
        for s in samples:
            w.writerow([_f(s.zeta[0].real), _f(s.zeta[1].real),
                        _f(s.tau_used) if np.isfinite(s.tau_used) else "inf",
                        _f(s.value.real), _f(s.value.imag), s.source])
    return path


def save_rows_csv(rows, columns, path) -> Path:
    """Generic deterministic CSV writer for report rows (list of dicts)."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            out = []
            for c in columns:
                v = r[c]
                if isinstance(v, bool):
                    out.append(str(v).lower())
                elif isinstance(v, (int, np.integer)):
                    out.append(str(int(v)))
                elif v is None:
                    out.append("")
                elif isinstance(v, str):
                    out.append(v)
                else:
                    out.append(_f(v))
            w.writerow(out)
    return path


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def save_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path
