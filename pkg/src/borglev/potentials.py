"""Builtin potential families used throughout the experiments."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .grid import GridSpec, Potential


def zero(grid: GridSpec) -> Potential:
    return Potential(np.zeros(grid.n_int), sup_bound=0.0, h1_bound=0.0, name="zero")


def constant(grid: GridSpec, c: float) -> Potential:
    return Potential(
        np.full(grid.n_int, float(c)), sup_bound=abs(c), name=f"constant({c})"
    )


def _interior_window(grid: GridSpec, margin: float) -> np.ndarray:
    """Smooth cutoff vanishing within `margin` of the boundary.

    Keeps differences of windowed potentials in the discrete H0^1 class.
    """
    xy = grid.interior_xy
    x, y = xy[:, 0], xy[:, 1]

    def ramp(t):
        # C^1 ramp from 0 at t=0 to 1 at t=1
        u = np.clip(t, 0.0, 1.0)
        return u * u * (3.0 - 2.0 * u)

    wx = ramp(x / margin) * ramp((grid.lx - x) / margin)
    wy = ramp(y / margin) * ramp((grid.ly - y) / margin)
    return wx * wy


def gaussian(
    grid: GridSpec,
    center: tuple[float, float] = (0.5, 0.5),
    width: float = 0.12,
    amp: float = 1.0,
) -> Potential:
    """Interior-supported Gaussian bump (windowed so it vanishes near Gamma)."""
    xy = grid.interior_xy
    r2 = (xy[:, 0] - center[0]) ** 2 + (xy[:, 1] - center[1]) ** 2
    v = amp * np.exp(-r2 / (2.0 * width**2))
    v *= _interior_window(grid, margin=0.15 * min(grid.lx, grid.ly))
    return Potential(
        v,
        sup_bound=float(np.max(np.abs(v), initial=0.0)) + 1e-12,
        name=f"gaussian({center},{width},{amp})",
    )


def mode(grid: GridSpec, jx: int = 1, jy: int = 1, amp: float = 1.0) -> Potential:
    """Separable sine mode amp*sin(jx*pi*x/lx)*sin(jy*pi*y/ly) (vanishes on Gamma)."""
    xy = grid.interior_xy
    v = amp * np.sin(jx * np.pi * xy[:, 0] / grid.lx) * np.sin(
        jy * np.pi * xy[:, 1] / grid.ly
    )
    return Potential(v, sup_bound=abs(amp) + 1e-12, name=f"mode({jx},{jy},{amp})")


def fourier_mode(grid: GridSpec, kx: int, ky: int, amp: float = 1.0) -> Potential:
    """Full-period mode amp*sin(2*pi*kx*x/lx)*sin(2*pi*ky*y/ly)."""
    xy = grid.interior_xy
    v = amp * np.sin(2 * np.pi * kx * xy[:, 0] / grid.lx) * np.sin(
        2 * np.pi * ky * xy[:, 1] / grid.ly
    )
    return Potential(v, sup_bound=abs(amp) + 1e-12, name=f"fourier_mode({kx},{ky},{amp})")


def random_potential(
    grid: GridSpec, seed: int = 0, smoothness: float = 2.0, amp: float = 1.0
) -> Potential:
    """Seeded truncated Fourier sine series, windowed to interior support.

    Coefficient of mode (j,k) decays like (j^2+k^2)^(-smoothness/2).
    """
    rng = np.random.default_rng(seed)
    n_modes = 6
    xy = grid.interior_xy
    v = np.zeros(grid.n_int)
    for j in range(1, n_modes + 1):
        for k in range(1, n_modes + 1):
            c = rng.standard_normal() / (j * j + k * k) ** (smoothness / 2.0)
            v += c * np.sin(j * np.pi * xy[:, 0] / grid.lx) * np.sin(
                k * np.pi * xy[:, 1] / grid.ly
            )
    v *= _interior_window(grid, margin=0.15 * min(grid.lx, grid.ly))
    vmax = float(np.max(np.abs(v), initial=0.0))
    if vmax > 0:
        v *= amp / vmax
    return Potential(
        v, sup_bound=abs(amp) + 1e-12, name=f"random({seed},{smoothness},{amp})"
    )


def scale(q: Potential, t: float) -> Potential:
    return Potential(
        t * q.values,
        sup_bound=abs(t) * q.sup_bound + 1e-15,
        h1_bound=None if q.h1_bound is None else abs(t) * q.h1_bound,
        name=f"{t}*{q.name}",
    )


def from_spec(grid: GridSpec, spec) -> Potential:
    """Build a potential from a config entry.

    Accepts the builtin names: "zero", ["constant", c],
    ["gaussian", [cx, cy], width, amp], ["mode", jx, jy, amp],
    ["random", seed, smoothness, amp].
    """
    if spec == "zero":
        return zero(grid)
    if not isinstance(spec, (list, tuple)) or not spec:
        raise ValidationError(f"bad potential spec: {spec!r}")
    kind, *args = spec
    if kind == "constant":
        return constant(grid, *args)
    if kind == "gaussian":
        center = tuple(args[0]) if args else (0.5, 0.5)
        return gaussian(grid, center, *args[1:])
    if kind == "mode":
        return mode(grid, *args)
    if kind == "random":
        return random_potential(grid, *args)
    raise ValidationError(f"unknown potential kind: {kind!r}")
