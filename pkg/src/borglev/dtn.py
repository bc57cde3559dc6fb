"""Dirichlet-to-Neumann maps at complex frequency.

Two routes to the same operator: direct boundary-value solves, and spectral
series built from eigenvalue/trace data (the derivative series, the
difference series with its three diagnostic addends, and the low-rank "hat"
part).  All matrices act on nodal boundary vectors: entries @ f gives the
normal derivative samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    NearEigenvalueError,
    QuadratureError,
    TruncationError,
    ValidationError,
)
from .grid import GridSpec, Potential, hs_weight_matrices
from .spectral import SpectralData, assemble_operator

_SPECTRUM_GAP = 1e-6


@dataclass
class DtnMatrix:
    """Discrete Lambda(q, lambda) or one of its spectral-series relatives."""

    entries: np.ndarray  # (n_bd, n_bd) complex
    lam: complex
    potential_id: str
    grid: GridSpec
    kind: str  # "direct" | "series-derivative" | "series-difference" | "low-rank-hat"
    meta: dict = field(default_factory=dict)

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(f, dtype=complex)

    def symmetry_residual(self) -> float:
        """Relative asymmetry of the bilinear form <Lambda f, g>."""
        W = self.grid.boundary_weights
        B = W[:, None] * self.entries
        denom = np.linalg.norm(B)
        if denom == 0:
            return 0.0
        return float(np.linalg.norm(B - B.T) / denom)


@dataclass
class OperatorNorms:
    l2_to_l2: float
    h12_to_l2: float


def operator_l2_norm(entries: np.ndarray, grid: GridSpec) -> float:
    """L2(Gamma) -> L2(Gamma) operator norm (largest weighted singular value)."""
    sqw = np.sqrt(grid.boundary_weights)
    return float(np.linalg.norm(sqw[:, None] * entries / sqw[None, :], 2))


def operator_h12_l2_norm(entries: np.ndarray, grid: GridSpec) -> float:
    """H^(1/2)(Gamma) -> L2(Gamma) surrogate norm."""
    _, from_hs = hs_weight_matrices(grid, 0.5)
    sqw = np.sqrt(grid.boundary_weights)
    return float(np.linalg.norm(sqw[:, None] * (entries @ from_hs), 2))


def operator_norms(mat: DtnMatrix) -> OperatorNorms:
    return OperatorNorms(
        l2_to_l2=operator_l2_norm(mat.entries, mat.grid),
        h12_to_l2=operator_h12_l2_norm(mat.entries, mat.grid),
    )


class BvpSolver:
    """Factorized solver for (-Laplace + q - lambda) u = 0, u = f on Gamma."""

    def __init__(self, q: Potential, lam: complex, grid: GridSpec,
                 spectrum: np.ndarray | None = None):
        if spectrum is not None:
            dist = np.abs(spectrum - lam)
            j = int(np.argmin(dist))
            if dist[j] < _SPECTRUM_GAP:
                raise NearEigenvalueError(lam, spectrum[j])
        self.q = q
        self.lam = complex(lam)
        self.grid = grid
        A = assemble_operator(q, grid).astype(complex)
        self._op = A - self.lam * sp.identity(grid.n_int, dtype=complex)
        self._lu = spla.splu(self._op.tocsc())
        step = grid.boundary_normal_step
        adj = grid.boundary_interior_index
        # boundary data enters the stencil of the adjacent interior node
        self._B = sp.csr_matrix(
            (1.0 / step**2, (adj, np.arange(grid.n_bd))),
            shape=(grid.n_int, grid.n_bd),
        )

    def solve(self, f: np.ndarray) -> np.ndarray:
        """Interior solution for boundary data f (also accepts a matrix of columns)."""
        f = np.asarray(f, dtype=complex)
        rhs = self._B @ f
        u = self._lu.solve(rhs)
        res = np.linalg.norm(self._op @ u - rhs)
        scale = max(np.linalg.norm(rhs), 1e-300)
        if res > 1e-10 * scale:
            raise NearEigenvalueError(self.lam, float("nan"))
        return u

    def resolvent(self, rhs: np.ndarray) -> np.ndarray:
        """Apply (A(q) - lambda)^(-1) to an interior field."""
        return self._lu.solve(np.asarray(rhs, dtype=complex))

    def normal_derivative(self, f: np.ndarray, u: np.ndarray) -> np.ndarray:
        """One-sided outward normal derivative (f_b - u_adjacent)/h."""
        adj = self.grid.boundary_interior_index
        step = self.grid.boundary_normal_step
        if f.ndim == 1:
            return (f - u[adj]) / step
        return (f - u[adj, :]) / step[:, None]

    def flux(self, f: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Quadrature-compatible normal derivative.

        Same one-sided formula, rescaled at corner-adjacent nodes so that
        the flux matrix is exactly symmetric under the trapezoid pairing:
        beta_b = hx*hy / (w_b * step_b^2) equals 1/step_b away from corners.
        The rescaling preserves flux(const)=0 for harmonic extensions of a
        constant, since both terms share the same coefficient.
        """
        g = self.grid
        adj = g.boundary_interior_index
        beta = g.hx * g.hy / (g.boundary_weights * g.boundary_normal_step**2)
        if f.ndim == 1:
            return beta * (f - u[adj])
        return beta[:, None] * (f - u[adj, :])


def solve_bvp(q: Potential, lam: complex, f, grid: GridSpec,
              spectrum: np.ndarray | None = None) -> np.ndarray:
    from .grid import _as_boundary_values

    fv = _as_boundary_values(f, grid).astype(complex)
    return BvpSolver(q, lam, grid, spectrum).solve(fv)


def dtn_direct(q: Potential, lam: complex, grid: GridSpec,
               spectrum: np.ndarray | None = None) -> DtnMatrix:
    """Lambda(q, lambda) column by column from boundary-value solves.

    Uses the quadrature-compatible flux, so the matrix is symmetric under
    the trapezoid duality pairing to rounding error and annihilates
    constants at q = 0, lambda = 0.
    """
    solver = BvpSolver(q, lam, grid, spectrum)
    F = np.eye(grid.n_bd, dtype=complex)
    U = solver.solve(F)
    entries = solver.flux(F, U)
    return DtnMatrix(entries, complex(lam), q.name, grid, "direct")


def _series_matrix(coeffs: np.ndarray, left: np.ndarray, right: np.ndarray,
                   w: np.ndarray) -> np.ndarray:
    """sum_k c_k * outer(left_k, w * right_k), ascending k, Kahan-compensated."""
    n = left.shape[1]
    M = np.zeros((n, n), dtype=complex)
    comp = np.zeros_like(M)
    for k in range(len(coeffs)):
        term = coeffs[k] * np.outer(left[k], w * right[k])
        y = term - comp
        t = M + y
        comp = (t - M) - y
        M = t
    return M


def derivative_series_tail_bound(
    K: int, lam: complex, m: int, trace_constant: float, c_star: float,
    c_upper: float, eps: float = 0.25,
) -> float:
    """Integral-comparison bound on the dropped tail of the derivative series.

    Uses the fitted trace bound ||t_k||^2 <= C^2 lambda_k^(3/2+eps) and the
    eigenvalue bracket c_* k <= lambda_k <= c^* k (n=2).
    """
    re, im = lam.real, lam.imag

    def term(x):
        lam_hi = c_upper * x
        lam_lo = c_star * x
        dist = np.sqrt(np.maximum(lam_lo - re, 0.0) ** 2 + im**2)
        dist = np.maximum(dist, np.abs(im))
        return trace_constant**2 * lam_hi ** (1.5 + eps) / dist ** (m + 1)

    if c_star * K <= re:
        raise ValidationError(
            "tail bound needs Re(lambda) below the truncated spectrum"
        )
    # map [K, inf) to (0, 1] via x = K/u; the endpoint singularity is mild
    val, _ = scipy.integrate.quad(
        lambda u: term(K / u) * K / u**2, 0.0, 1.0, limit=200)
    return math.factorial(m) * (term(K) + val)


def dtn_derivative_series(
    sd: SpectralData, lam: complex, m: int, N_shift: int = 0,
    K: int | None = None, weyl=None, tol: float | None = None,
) -> DtnMatrix:
    """m-th frequency derivative of Lambda from spectral data.

    -m! * sum_{N<k<=K} (lambda_k - lam)^(-(m+1)) <., d_nu phi_k> d_nu phi_k.
    """
    g = sd.grid
    if m < 2:  # smallest integer exceeding n/2 + 3/4 at n=2
        raise ValidationError(f"need m >= 2 for absolute convergence, got {m}")
    K = sd.K if K is None else min(K, sd.K)
    if not 0 <= N_shift <= K:
        raise ValidationError(f"need 0 <= N_shift <= K, got {N_shift}")
    lam = complex(lam)
    gap = np.min(np.abs(sd.eigenvalues - lam)) if K else np.inf
    if gap < _SPECTRUM_GAP:
        raise NearEigenvalueError(lam, sd.eigenvalues[np.argmin(np.abs(sd.eigenvalues - lam))])
    T = sd.traces[N_shift:K]
    coeffs = -math.factorial(m) / (sd.eigenvalues[N_shift:K] - lam) ** (m + 1)
    entries = _series_matrix(coeffs, T, T, g.boundary_weights)
    tail = None
    if weyl is not None:
        tail = derivative_series_tail_bound(
            K, lam, m, weyl.trace_constant, weyl.c_star, weyl.c_upper, weyl.eps
        )
        if tol is not None and tail > tol:
            # estimate the K needed by doubling
            k_need = K
            for _ in range(30):
                k_need *= 2
                if derivative_series_tail_bound(
                    k_need, lam, m, weyl.trace_constant, weyl.c_star,
                    weyl.c_upper, weyl.eps,
                ) <= tol:
                    break
            raise TruncationError(tail, tol, required_k=k_need)
    return DtnMatrix(
        entries, lam, sd.potential_id, g, "series-derivative",
        {"order": m, "K": K, "N_shift": N_shift, "tail_bound": tail},
    )


def dtn_difference_series(
    sd1: SpectralData, sd2: SpectralData, lam: complex, N_shift: int = 0,
    K: int | None = None,
) -> DtnMatrix:
    """Truncated Lambda(q1,lam) - Lambda(q2,lam) from aligned spectral data.

    Assembled as the three addends I1 + I2 + I3: I1 carries the eigenvalue
    differences through the factorized coefficient
    (lambda_j(q1)-lambda_j(q2)) / ((lam-lambda_j(q2))(lam-lambda_j(q1))),
    I2 and I3 carry the trace differences.  The addends are kept in meta.
    """
    if sd1.K != sd2.K or sd1.grid != sd2.grid:
        raise ValidationError("difference series needs aligned data on one grid")
    K = sd1.K if K is None else min(K, sd1.K)
    lam = complex(lam)
    for sd in (sd1, sd2):
        gap = np.min(np.abs(sd.eigenvalues[:K] - lam))
        if gap < _SPECTRUM_GAP:
            raise NearEigenvalueError(lam, sd.eigenvalues[np.argmin(np.abs(sd.eigenvalues[:K] - lam))])
    w = sd1.grid.boundary_weights
    l1 = sd1.eigenvalues[N_shift:K]
    l2 = sd2.eigenvalues[N_shift:K]
    T1 = sd1.traces[N_shift:K]
    T2 = sd2.traces[N_shift:K]
    c1 = (l1 - l2) / ((lam - l2) * (lam - l1))
    c23 = 1.0 / (lam - l2)
    I1 = _series_matrix(c1, T1, T1, w)
    I2 = _series_matrix(c23, T1 - T2, T1, w)
    I3 = _series_matrix(c23, T2, T1 - T2, w)
    return DtnMatrix(
        I1 + I2 + I3, lam, f"{sd1.potential_id}-{sd2.potential_id}",
        sd1.grid, "series-difference",
        {"K": K, "N_shift": N_shift, "I1": I1, "I2": I2, "I3": I3},
    )


def split_hat_tilde(sd: SpectralData, lam: complex, N: int):
    """Decompose Lambda into the rank-N "hat" part and a tail handle.

    The hat part sums the first N spectral terms explicitly; the tail is
    only accessible through difference/derivative series (it has no
    convergent direct representation), so the handle exposes exactly those.
    """
    if N >= sd.K:
        raise ValidationError(f"need N < K, got N={N}, K={sd.K}")
    lam = complex(lam)
    w = sd.grid.boundary_weights
    T = sd.traces[:N]
    coeffs = 1.0 / (sd.eigenvalues[:N] - lam)
    hat = DtnMatrix(
        _series_matrix(coeffs, T, T, w), lam, sd.potential_id, sd.grid,
        "low-rank-hat", {"N": N},
    )
    return hat, TildeHandle(sd=sd, N=N)


@dataclass
class TildeHandle:
    """Access to the non-low-rank part of Lambda, via series only."""

    sd: SpectralData
    N: int

    def derivative(self, lam: complex, m: int, **kw) -> DtnMatrix:
        return dtn_derivative_series(self.sd, lam, m, N_shift=self.N, **kw)

    def difference(self, other: SpectralData, lam: complex, **kw) -> DtnMatrix:
        return dtn_difference_series(self.sd, other, lam, N_shift=self.N, **kw)


# 5-point central divided-difference stencils, orders 0..2
_STENCILS = {
    0: np.array([0, 0, 1.0, 0, 0]),
    1: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    2: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
}


def dtn_divided_difference(
    q: Potential, lam: complex, grid: GridSpec, order: int,
    step: float | None = None, spectrum: np.ndarray | None = None,
) -> np.ndarray:
    """order-th frequency derivative of the direct DtN by divided differences.

    Independent of the spectral series: every stencil point is a fresh
    boundary-value solve.
    """
    if order not in _STENCILS:
        raise ValidationError(f"divided differences implemented for orders {sorted(_STENCILS)}")
    if order == 0:
        return dtn_direct(q, lam, grid, spectrum).entries
    if step is None:
        step = 1e-2 * max(abs(lam), 1.0) ** 0.5
    pts = [lam + (p - 2) * step for p in range(5)]
    acc = np.zeros((grid.n_bd, grid.n_bd), dtype=complex)
    for c, z in zip(_STENCILS[order], pts):
        if c != 0:
            acc += c * dtn_direct(q, z, grid, spectrum).entries
    return acc / step**order


def _fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return float(np.polyfit(lx, ly, 1)[0])


def verify_dtn_decay(
    q1: Potential, q2: Potential, grid: GridSpec, m: int, eps: float,
    lambda_list,
) -> dict:
    """Decay of ||Lambda^(j)(q1) - Lambda^(j)(q2)|| as Re(lambda) -> -inf.

    Divided differences of direct solves, H^(1/2)->L2 surrogate norms, and
    per-order log-log slope fits against -j - sigma_eps.
    """
    if not 0 < eps < 0.5:
        raise ValidationError(f"need 0 < eps < 1/2, got {eps}")
    floor = -2.0 * max(q1.sup_bound, q2.sup_bound)
    lams = [complex(l) for l in lambda_list]
    if any(l.real > floor for l in lams):
        raise ValidationError(
            f"all frequencies must satisfy Re(lambda) <= {floor}"
        )
    sigma = (1.0 - 2.0 * eps) / 4.0
    re = np.array([abs(l.real) for l in lams])
    report = {"sigma": sigma, "re_lambda": re, "orders": {}}
    for j in range(m + 1):
        norms = []
        for lam in lams:
            D = dtn_divided_difference(q1, lam, grid, j) - dtn_divided_difference(
                q2, lam, grid, j
            )
            norms.append(operator_h12_l2_norm(D, grid))
        norms = np.array(norms)
        if np.all(norms == 0):
            report["orders"][j] = {
                "norms": norms, "slope": None, "predicted": -j - sigma,
                "smallest_C": 0.0, "passes": True,
            }
            continue
        slope = _fit_slope(re, norms)
        report["orders"][j] = {
            "norms": norms,
            "slope": slope,
            "predicted": -j - sigma,
            "smallest_C": float(np.max(norms * re ** (j + sigma))),
            "passes": slope <= -j - sigma + 0.1,
        }
    return report


def _gauss_panels(a: float, b: float, n_panels: int, order: int = 12):
    """Composite Gauss-Legendre nodes/weights on [a, b], refined toward b."""
    # geometric panel edges clustered at b
    r = np.geomspace(1e-3, 1.0, n_panels + 1)[::-1]
    edges = b - (b - a) * (r - r[-1]) / (r[0] - r[-1])
    edges[0], edges[-1] = a, b
    xg, wg = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        nodes.append(mid + half * xg)
        weights.append(half * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def verify_integral_formula(
    sd1: SpectralData, sd2: SpectralData, lam: complex, m: int = 2,
    R_cut: float = 200.0, n_panels: int = 48,
) -> dict:
    """Check the iterated-integral representation of the DtN difference.

    Integrates the m-th derivative difference series m times along the line
    Im z = Im lam from Re z = -R_cut up to lam (via the equivalent one-pass
    repeated-integration kernel (lam-z)^(m-1)/(m-1)!) and compares with the
    difference series at lam.  The truncation at -R_cut leaves the Taylor
    polynomial of degree m-1 at the left endpoint as the analytic tail,
    which is evaluated and reported.
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise ValidationError("need Im(lambda) > 0 for the line integrals")
    if R_cut <= -lam.real + 1:
        raise ValidationError("R_cut must reach left of lambda")
    z0 = complex(-R_cut, lam.imag)
    w = sd1.grid.boundary_weights
    l1, l2 = sd1.eigenvalues, sd2.eigenvalues
    T1, T2 = sd1.traces, sd2.traces

    def iterated(n_p):
        x, wq = _gauss_panels(z0.real, lam.real, n_p)
        z = x + 1j * lam.imag
        kern = (lam - z) ** (m - 1) / math.factorial(m - 1)
        fac = -math.factorial(m)
        # scalar iterated integrals per eigenvalue, vectorized over nodes
        I1 = (wq * kern * fac) @ (1.0 / (l1[None, :] - z[:, None]) ** (m + 1))
        I2 = (wq * kern * fac) @ (1.0 / (l2[None, :] - z[:, None]) ** (m + 1))
        return _series_matrix(I1, T1, T1, w) - _series_matrix(I2, T2, T2, w)

    M_int = iterated(n_panels)
    M_check = iterated(2 * n_panels)
    quad_err = operator_l2_norm(M_int - M_check, sd1.grid)
    M_diff = dtn_difference_series(sd1, sd2, lam).entries
    scale = operator_l2_norm(M_diff, sd1.grid)
    if scale > 0 and quad_err > 1e-6 * scale:
        raise QuadratureError(
            f"panel refinement changed the integral by {quad_err:.3e}"
        )
    residual = operator_l2_norm(M_diff - M_check, sd1.grid)
    # Taylor tail at the left endpoint: D(z0) + ... + D^(m-1)(z0)(lam-z0)^(m-1)/(m-1)!
    tail = dtn_difference_series(sd1, sd2, z0).entries.copy()
    for j in range(1, m):
        cj1 = -math.factorial(j) / (l1 - z0) ** (j + 1)
        cj2 = -math.factorial(j) / (l2 - z0) ** (j + 1)
        Dj = _series_matrix(cj1, T1, T1, w) - _series_matrix(cj2, T2, T2, w)
        tail += Dj * (lam - z0) ** j / math.factorial(j)
    tail_norm = operator_l2_norm(tail, sd1.grid)
    return {
        "residual": residual,
        "tail_estimate": tail_norm,
        "difference_norm": scale,
        "quadrature_error": quad_err,
        "R_cut": R_cut,
    }
