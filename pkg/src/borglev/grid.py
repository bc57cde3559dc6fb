"""Discrete geometry of the rectangle, boundary parametrization and quadrature.

Interior nodes live on a uniform tensor grid, row-major in (y, x):
node ``j*nx + i`` sits at ``((i+1)*hx, (j+1)*hy)``.  Boundary nodes are the
grid points on the four sides, corners excluded, ordered counterclockwise by
arclength starting from the bottom-left: bottom, right side, top (reversed),
left side (reversed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError

# side codes, also the outward-normal axis: 0/1 -> y-normal, 2/3 -> x-normal
BOTTOM, RIGHT, TOP, LEFT = 0, 1, 2, 3


@dataclass(frozen=True)
class GridSpec:
    """Rectangle [0,lx]x[0,ly] with nx*ny interior nodes."""

    lx: float
    ly: float
    nx: int
    ny: int

    @property
    def hx(self) -> float:
        return self.lx / (self.nx + 1)

    @property
    def hy(self) -> float:
        return self.ly / (self.ny + 1)

    @property
    def n_int(self) -> int:
        return self.nx * self.ny

    @property
    def n_bd(self) -> int:
        return 2 * self.nx + 2 * self.ny

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.lx + self.ly)

    @cached_property
    def interior_xy(self) -> np.ndarray:
        """(n_int, 2) coordinates, row-major in (y, x)."""
        x = (np.arange(self.nx) + 1) * self.hx
        y = (np.arange(self.ny) + 1) * self.hy
        xx, yy = np.meshgrid(x, y)  # shape (ny, nx)
        return np.column_stack([xx.ravel(), yy.ravel()])

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        """Structured description of boundary nodes in arclength order.

        Columns: x, y, arclength, side code.
        """
        lx, ly, hx, hy = self.lx, self.ly, self.hx, self.hy
        xs = (np.arange(self.nx) + 1) * hx
        ys = (np.arange(self.ny) + 1) * hy
        rows = []
        for x in xs:  # bottom, y=0
            rows.append((x, 0.0, x, BOTTOM))
        for y in ys:  # right, x=lx
            rows.append((lx, y, lx + y, RIGHT))
        for x in xs[::-1]:  # top, y=ly, decreasing x
            rows.append((x, ly, lx + ly + (lx - x), TOP))
        for y in ys[::-1]:  # left, x=0, decreasing y
            rows.append((0.0, y, 2 * lx + ly + (ly - y), LEFT))
        return np.array(rows)

    @property
    def boundary_xy(self) -> np.ndarray:
        return self.boundary_nodes[:, :2]

    @property
    def boundary_arclength(self) -> np.ndarray:
        return self.boundary_nodes[:, 2]

    @property
    def boundary_side(self) -> np.ndarray:
        return self.boundary_nodes[:, 3].astype(int)

    @cached_property
    def boundary_weights(self) -> np.ndarray:
        """Trapezoid quadrature weights on the closed boundary curve."""
        s = self.boundary_arclength
        P = self.perimeter
        nxt = np.roll(s, -1).copy()
        nxt[-1] += P
        prv = np.roll(s, 1).copy()
        prv[0] -= P
        return (nxt - prv) / 2.0

    @cached_property
    def boundary_interior_index(self) -> np.ndarray:
        """Index of the interior node adjacent to each boundary node."""
        idx = np.empty(self.n_bd, dtype=int)
        for b, (x, y, _, side) in enumerate(self.boundary_nodes):
            side = int(side)
            if side == BOTTOM:
                i, j = int(round(x / self.hx)) - 1, 0
            elif side == TOP:
                i, j = int(round(x / self.hx)) - 1, self.ny - 1
            elif side == LEFT:
                i, j = 0, int(round(y / self.hy)) - 1
            else:  # RIGHT
                i, j = self.nx - 1, int(round(y / self.hy)) - 1
            idx[b] = j * self.nx + i
        return idx

    @cached_property
    def boundary_normal_step(self) -> np.ndarray:
        """Grid spacing along the outward normal at each boundary node."""
        side = self.boundary_side
        return np.where((side == BOTTOM) | (side == TOP), self.hy, self.hx)

    @cached_property
    def _fourier_basis(self):
        """QR-orthonormalized discrete Fourier modes on the boundary.

        Modes exp(2*pi*i*k*s/P), ordered k = 0, 1, -1, 2, -2, ..., are
        orthonormalized against the quadrature-weighted inner product so that
        the k=0 column stays the (normalized) constant and Parseval at s=0
        reproduces the trapezoid L2 norm exactly.
        """
        n = self.n_bd
        ks = np.zeros(n, dtype=int)
        for m in range(1, n):
            ks[m] = (m + 1) // 2 * (1 if m % 2 == 1 else -1)
        s = self.boundary_arclength
        P = self.perimeter
        E = np.exp(2j * np.pi * np.outer(s, ks) / P)
        sqw = np.sqrt(self.boundary_weights)
        V = (sqw[:, None] * E) / np.sqrt(P)
        Q, _ = np.linalg.qr(V)
        return Q, ks, sqw

    def to_json(self) -> str:
        return json.dumps(
            {"lx": self.lx, "ly": self.ly, "nx": self.nx, "ny": self.ny}
        )

    @classmethod
    def from_json(cls, text: str) -> "GridSpec":
        d = json.loads(text)
        return build_grid(d["lx"], d["ly"], d["nx"], d["ny"])


@dataclass
class Potential:
    """Real potential sampled on the interior nodes, extended by zero."""

    values: np.ndarray  # flat, length n_int
    sup_bound: float
    h1_bound: float | None = None
    name: str = "custom"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        vmax = float(np.max(np.abs(self.values), initial=0.0))
        if vmax > self.sup_bound + 1e-12:
            raise ValidationError(
                f"max|q|={vmax} exceeds declared sup_bound={self.sup_bound}"
            )

    def l2_norm(self, grid: GridSpec) -> float:
        return float(np.sqrt(grid.hx * grid.hy * np.sum(self.values**2)))


@dataclass
class BoundaryField:
    """Complex samples on the boundary nodes, in arclength order."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()


def _as_boundary_values(f, grid: GridSpec) -> np.ndarray:
    v = f.values if isinstance(f, BoundaryField) else np.asarray(f)
    v = np.asarray(v).ravel()
    if v.size != grid.n_bd:
        raise ValidationError(
            f"boundary field length {v.size} != n_bd {grid.n_bd}"
        )
    return v


def build_grid(lx: float, ly: float, nx: int, ny: int) -> GridSpec:
    """Validated GridSpec constructor."""
    if lx <= 0 or ly <= 0:
        raise ValidationError(f"side lengths must be positive, got {lx}, {ly}")
    if nx < 8 or ny < 8:
        raise ValidationError(f"need nx, ny >= 8, got {nx}, {ny}")
    return GridSpec(float(lx), float(ly), int(nx), int(ny))


def boundary_inner_product(f, g, grid: GridSpec) -> complex:
    """Trapezoid approximation of the bilinear pairing int_Gamma f*g ds.

    No conjugation: this is the duality form, symmetric by construction.
    """
    fv = _as_boundary_values(f, grid)
    gv = _as_boundary_values(g, grid)
    return complex(np.sum(grid.boundary_weights * fv * gv))


def boundary_l2_norm(f, grid: GridSpec) -> float:
    fv = _as_boundary_values(f, grid)
    return float(np.sqrt(np.sum(grid.boundary_weights * np.abs(fv) ** 2)))


def hs_norm(f, s: float, grid: GridSpec) -> float:
    """Discrete H^s(Gamma) surrogate via periodic arclength Fourier modes.

    Mode k is weighted by (1+k^2)^(s/2); s=0 recovers the trapezoid L2 norm
    exactly (the mode basis is orthonormal in the weighted inner product).
    """
    if not -1.0 <= s <= 1.0:
        raise ValidationError(f"need -1 <= s <= 1, got {s}")
    fv = _as_boundary_values(f, grid)
    Q, ks, sqw = grid._fourier_basis
    c = Q.conj().T @ (sqw * fv)
    return float(np.sqrt(np.sum((1.0 + ks.astype(float) ** 2) ** s * np.abs(c) ** 2)))


def hs_weight_matrices(grid: GridSpec, s: float = 0.5):
    """Maps between nodal values and H^s-weighted Fourier coefficients.

    Returns (to_hs, from_hs) with ``to_hs @ f`` giving coefficients whose
    Euclidean norm is the H^s surrogate norm of f, and ``from_hs`` its inverse.
    """
    Q, ks, sqw = grid._fourier_basis
    d = (1.0 + ks.astype(float) ** 2) ** (s / 2.0)
    to_hs = d[:, None] * (Q.conj().T * sqw[None, :])
    from_hs = (Q / sqw[:, None]) * (1.0 / d)[None, :]
    return to_hs, from_hs
