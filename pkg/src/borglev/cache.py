"""Content-addressed on-disk cache for spectral datasets.

Keyed by (potential spec, grid, K); payload integrity is verified by a
stored digest, and corrupt entries are recomputed transparently.  The
location defaults to ~/.cache/borglev and is overridden by the
BORGLEV_CACHE_DIR environment variable.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .grid import GridSpec
from .io import load_spectral, save_spectral
from .potentials import from_spec
from .spectral import SpectralData, solve_eigen


def cache_dir() -> Path:
    root = os.environ.get("BORGLEV_CACHE_DIR")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "borglev"


def dataset_id(potential_spec, grid: GridSpec, K: int) -> str:
    key = json.dumps(
        {"potential": potential_spec,
         "grid": [grid.lx, grid.ly, grid.nx, grid.ny], "K": K},
        sort_keys=True,
    )
    return hashlib.sha256(key.encode()).hexdigest()[:24]


def _payload_digest(prefix: Path) -> str:
    h = hashlib.sha256()
    for suffix in (".json", ".csv"):
        h.update(prefix.with_suffix(suffix).read_bytes())
    return h.hexdigest()


def cache_spectral(potential_spec, grid: GridSpec, K: int,
                   status: dict | None = None) -> tuple[str, SpectralData]:
    """Spectral data for (potential spec, grid, K), cached on disk.

    Returns (dataset id, data).  status, if given, gets a "hit" flag.
    """
    did = dataset_id(potential_spec, grid, K)
    root = cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    prefix = root / did
    digest_file = prefix.with_suffix(".sha256")
    if (prefix.with_suffix(".json").exists()
            and prefix.with_suffix(".csv").exists()
            and digest_file.exists()):
        if digest_file.read_text().strip() == _payload_digest(prefix):
            if status is not None:
                status["hit"] = True
            return did, load_spectral(prefix)
        # corrupt entry: fall through and recompute
    if status is not None:
        status["hit"] = False
    sd = solve_eigen(from_spec(grid, potential_spec), grid, K)
    save_spectral(sd, prefix)
    digest_file.write_text(_payload_digest(prefix) + "\n")
    return did, sd
