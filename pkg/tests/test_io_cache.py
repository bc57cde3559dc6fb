"""File formats round-trip exactly; the spectral cache is content-addressed."""

import json

import numpy as np
import pytest

from borglev.cache import cache_dir, cache_spectral, dataset_id
from borglev.dtn import dtn_direct
from borglev.errors import ValidationError
from borglev.io import (
    load_dtn_entries,
    load_spectral,
    save_dtn,
    save_fourier_samples,
    save_json,
    save_rows_csv,
    save_spectral,
)
from borglev.potentials import gaussian, zero
from borglev.probe import FourierSample
from borglev.spectral import solve_eigen


def test_spectral_roundtrip(tmp_path, grid16):
    sd = solve_eigen(gaussian(grid16, (0.5, 0.5), 0.12, 2.0), grid16, 30)
    save_spectral(sd, tmp_path / "spec")
    back = load_spectral(tmp_path / "spec")
    assert back.K == sd.K
    assert back.grid == sd.grid
    assert back.potential_id == sd.potential_id
    # %.17g formatting is repr-faithful for doubles: exact round-trip
    assert np.array_equal(back.eigenvalues, sd.eigenvalues)
    assert np.array_equal(back.traces, sd.traces)


def test_spectral_save_deterministic(tmp_path, grid16):
    sd = solve_eigen(zero(grid16), grid16, 20)
    save_spectral(sd, tmp_path / "a")
    save_spectral(sd, tmp_path / "b")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_spectral_load_rejects_row_mismatch(tmp_path, grid16):
    sd = solve_eigen(zero(grid16), grid16, 20)
    save_spectral(sd, tmp_path / "spec")
    csv_path = tmp_path / "spec.csv"
    lines = csv_path.read_text().splitlines()
    csv_path.write_text("\n".join(lines[:-1]) + "\n")  # drop one row
    with pytest.raises(ValidationError):
        load_spectral(tmp_path / "spec")


def test_dtn_roundtrip(tmp_path, grid16):
    mat = dtn_direct(gaussian(grid16, (0.5, 0.5), 0.12, 2.0),
                     complex(15.0, 8.0), grid16)
    save_dtn(mat, tmp_path / "dtn")
    back = load_dtn_entries(tmp_path / "dtn")
    assert np.array_equal(back, mat.entries)
    meta = json.loads((tmp_path / "dtn.json").read_text())
    assert meta["lambda"] == [15.0, 8.0]
    assert meta["kind"] == "direct"


def test_fourier_samples_format(tmp_path):
    samples = [
        FourierSample(zeta=np.array([1.0 + 0j, 2.0 + 0j]),
                      value=0.5 - 0.25j, tau_used=6.0, source="direct"),
        FourierSample(zeta=np.array([0.0j, 3.0 + 0j]),
                      value=1.0 + 0j, tau_used=np.inf, source="quadrature"),
    ]
    path = save_fourier_samples(samples, tmp_path / "samples.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "xi1,xi2,tau,re,im,source"
    assert lines[1].split(",") == ["1", "2", "6", "0.5", "-0.25", "direct"]
    assert lines[2].split(",")[2] == "inf"


def test_rows_csv_formatting(tmp_path):
    rows = [{"a": True, "b": None, "c": 3, "d": 0.1, "e": "x"}]
    path = save_rows_csv(rows, ["a", "b", "c", "d", "e"], tmp_path / "r.csv")
    body = path.read_text().splitlines()[1]
    assert body == "true,,3,0.10000000000000001,x"


def test_save_json_sorted_and_typed(tmp_path):
    path = save_json({"z": np.float64(1.5), "a": np.arange(3),
                      "c": 1 + 2j}, tmp_path / "o.json")
    text = path.read_text()
    assert text.index('"a"') < text.index('"c"') < text.index('"z"')
    back = json.loads(text)
    assert back["a"] == [0, 1, 2]
    assert back["c"] == {"re": 1.0, "im": 2.0}


def test_dataset_id_depends_on_inputs(grid16, grid24):
    a = dataset_id("zero", grid16, 30)
    assert a == dataset_id("zero", grid16, 30)
    assert a != dataset_id("zero", grid16, 31)
    assert a != dataset_id("zero", grid24, 30)
    assert a != dataset_id(["constant", 1.0], grid16, 30)
    assert len(a) == 24


def test_cache_miss_then_hit(grid16):
    status = {}
    did, sd = cache_spectral("zero", grid16, 25, status)
    assert status == {"hit": False}
    did2, sd2 = cache_spectral("zero", grid16, 25, status)
    assert status == {"hit": True}
    assert did == did2
    assert np.array_equal(sd.eigenvalues, sd2.eigenvalues)
    assert np.array_equal(sd.traces, sd2.traces)


def test_cache_recovers_from_corruption(grid16):
    did, sd = cache_spectral("zero", grid16, 25)
    victim = cache_dir() / f"{did}.csv"
    victim.write_text(victim.read_text().replace("0", "9", 1))
    status = {}
    _, sd2 = cache_spectral("zero", grid16, 25, status)
    assert status == {"hit": False}  # digest mismatch forced a recompute
    assert np.array_equal(sd.eigenvalues, sd2.eigenvalues)
    status = {}
    cache_spectral("zero", grid16, 25, status)
    assert status == {"hit": True}  # healed entry is valid again


def test_cache_respects_env_dir(grid16, tmp_path, monkeypatch):
    monkeypatch.setenv("BORGLEV_CACHE_DIR", str(tmp_path / "alt"))
    assert cache_dir() == tmp_path / "alt"
    cache_spectral("zero", grid16, 25)
    assert any((tmp_path / "alt").iterdir())
