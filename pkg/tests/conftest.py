"""Shared fixtures: small grids and cached spectral solves."""

import numpy as np
import pytest

from borglev.grid import build_grid
from borglev.potentials import gaussian, zero
from borglev.spectral import solve_eigen


@pytest.fixture(scope="session")
def grid16():
    return build_grid(1.0, 1.0, 16, 16)


@pytest.fixture(scope="session")
def grid24():
    return build_grid(1.0, 1.0, 24, 24)


@pytest.fixture(scope="session")
def grid32():
    return build_grid(1.0, 1.0, 32, 32)


@pytest.fixture(scope="session")
def rect_grid():
    """A non-square rectangle, to catch lx/ly mixups."""
    return build_grid(1.5, 1.0, 18, 12)


@pytest.fixture(scope="session")
def gauss24(grid24):
    return gaussian(grid24, (0.5, 0.5), 0.12, 2.0)


@pytest.fixture(scope="session")
def sd_gauss24(grid24, gauss24):
    return solve_eigen(gauss24, grid24, 200)


@pytest.fixture(scope="session")
def sd_zero24(grid24):
    return solve_eigen(zero(grid24), grid24, 200)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    """Keep the on-disk spectral cache out of the user's home during tests."""
    monkeypatch.setenv("BORGLEV_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture(autouse=True)
def _fixed_print_precision():
    with np.printoptions(precision=6):
        yield
