"""Dirichlet spectrum of -Laplace + q and boundary spectral data.

The operator is the symmetric 5-point finite-difference discretization, so
min-max monotonicity and the Weyl perturbation bound hold exactly at the
matrix level.  Normal-derivative traces use the ghost-free one-sided formula
-phi(nearest interior)/h, which is the accuracy bottleneck (first order).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import EigensolverError, ValidationError
from .grid import GridSpec, Potential

# below this size the dense symmetric solver is both faster and more robust
_DENSE_LIMIT = 6500


@dataclass
class SpectralData:
    """Ordered eigenvalues with boundary traces of orthonormal eigenfunctions."""

    eigenvalues: np.ndarray          # (K,)
    traces: np.ndarray               # (K, n_bd), real
    grid: GridSpec
    potential_id: str
    vectors: np.ndarray | None = None  # (K, n_int), L2(Omega)-orthonormal

    @property
    def K(self) -> int:
        return len(self.eigenvalues)


@dataclass
class WeylReport:
    """Empirical constants for the eigenvalue and trace growth bounds (n=2)."""

    c_star: float          # min lambda_k / k on the fit window
    c_upper: float         # max lambda_k / k
    c_n: float             # counting-function coefficient, N(r) ~ c_n r^2
    c_tilde: float         # sqrt(lambda_k) ~ c_tilde * sqrt(k)
    A_n: float             # max |sqrt(lambda_k) - c_tilde sqrt(k)|
    trace_constant: float  # smallest C with ||d_nu phi_k|| <= C lambda_k^(3/4+eps/2)
    eps: float
    fit_range: tuple[int, int]


def assemble_operator(q: Potential, grid: GridSpec) -> sp.csr_matrix:
    """Sparse symmetric matrix of the Dirichlet 5-point -Laplace + q."""
    if q.values.size != grid.n_int:
        raise ValidationError(
            f"potential size {q.values.size} != n_int {grid.n_int}"
        )
    nx, ny = grid.nx, grid.ny
    ix2, iy2 = 1.0 / grid.hx**2, 1.0 / grid.hy**2
    Dx = sp.diags(
        [2.0 * ix2 * np.ones(nx), -ix2 * np.ones(nx - 1), -ix2 * np.ones(nx - 1)],
        [0, 1, -1],
    )
    Dy = sp.diags(
        [2.0 * iy2 * np.ones(ny), -iy2 * np.ones(ny - 1), -iy2 * np.ones(ny - 1)],
        [0, 1, -1],
    )
    A = sp.kron(sp.identity(ny), Dx) + sp.kron(Dy, sp.identity(nx))
    return (A + sp.diags(q.values)).tocsr()


def _gauge_fix(traces: np.ndarray) -> np.ndarray:
    """Flip signs so the first significant trace entry has positive real part."""
    out = traces.copy()
    for k in range(out.shape[0]):
        row = out[k]
        big = np.abs(row) > 1e-8 * max(np.max(np.abs(row)), 1e-300)
        idx = np.argmax(big)
        if big[idx] and row[idx].real < 0:
            out[k] = -row
    return out


def traces_from_vectors(vectors: np.ndarray, grid: GridSpec) -> np.ndarray:
    """One-sided normal derivatives -phi(interior)/h at the boundary nodes."""
    inner = vectors[:, grid.boundary_interior_index]
    return _gauge_fix(-inner / grid.boundary_normal_step[None, :])


def solve_eigen(q: Potential, grid: GridSpec, K: int) -> SpectralData:
    """First K Dirichlet eigenpairs with boundary traces."""
    if not 1 <= K <= grid.n_int:
        raise ValidationError(f"need 1 <= K <= n_int, got K={K}")
    A = assemble_operator(q, grid)
    if grid.n_int <= _DENSE_LIMIT:
        vals, vecs = scipy.linalg.eigh(A.toarray(), subset_by_index=[0, K - 1])
    else:
        try:
            vals, vecs = spla.eigsh(A, k=K, sigma=0.0, which="LM")
        except spla.ArpackNoConvergence as exc:
            raise EigensolverError(
                f"eigsh did not converge for {q.name}: {exc}"
            ) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    # l2-orthonormal -> L2(Omega)-orthonormal
    vecs = vecs.T / np.sqrt(grid.hx * grid.hy)
    traces = traces_from_vectors(vecs, grid)
    return SpectralData(
        eigenvalues=vals,
        traces=traces,
        grid=grid,
        potential_id=q.name,
        vectors=vecs,
    )


def weyl_validate(sd: SpectralData, m: int = 2, eps: float = 0.25) -> WeylReport:
    """Fit the a-priori spectral constants on a discretization-safe window."""
    K = sd.K
    if K < 50:
        raise ValidationError(f"need K >= 50 for the Weyl fits, got K={K}")
    hi = int(np.floor(0.8 * K))  # top 20% is discretization-polluted
    k = np.arange(1, hi + 1, dtype=float)
    lam = sd.eigenvalues[:hi]
    ratio = lam / k  # n=2: k^(2/n) = k
    c_star, c_upper = float(np.min(ratio)), float(np.max(ratio))
    c_n = float(np.sum(k * lam) / np.sum(lam**2))
    c_tilde = 1.0 / np.sqrt(c_n)
    A_n = float(np.max(np.abs(np.sqrt(lam) - c_tilde * np.sqrt(k))))
    w = sd.grid.boundary_weights
    trace_norms = np.sqrt(np.sum(w[None, :] * sd.traces[:hi] ** 2, axis=1))
    trace_constant = float(np.max(trace_norms / lam ** (0.75 + eps / 2.0)))
    return WeylReport(
        c_star=c_star,
        c_upper=c_upper,
        c_n=c_n,
        c_tilde=c_tilde,
        A_n=A_n,
        trace_constant=trace_constant,
        eps=eps,
        fit_range=(1, hi),
    )


def _clusters(eigenvalues: np.ndarray, cluster_tol: float):
    """Maximal runs of eigenvalues with relative gap below cluster_tol."""
    groups, start = [], 0
    for k in range(1, len(eigenvalues) + 1):
        if k == len(eigenvalues) or (
            eigenvalues[k] - eigenvalues[k - 1]
            > cluster_tol * max(abs(eigenvalues[k]), 1.0)
        ):
            groups.append((start, k))
            start = k
    return groups


def align_traces(
    sd1: SpectralData, sd2: SpectralData, cluster_tol: float = 1e-6
) -> tuple[SpectralData, SpectralData]:
    """Gauge-minimize sd2's traces against sd1's.

    The gauge freedom sits in sd2: within each of its (near-)degenerate
    eigenvalue clusters any orthogonal recombination of eigenfunctions is
    equally valid spectral data, so the traces are rotated by the
    orthogonal Procrustes solution minimizing the summed L2(Gamma)
    distance to sd1; simple eigenvalues reduce to sign flips.
    """
    if sd1.K != sd2.K or sd1.grid != sd2.grid:
        raise ValidationError("spectral data must share grid and K")
    w = sd1.grid.boundary_weights
    new_traces = sd2.traces.copy()
    for a, b in _clusters(sd2.eigenvalues, cluster_tol):
        T1 = sd1.traces[a:b].T  # (n_bd, d)
        T2 = sd2.traces[a:b].T
        M = T2.T @ (w[:, None] * T1)
        U, _, Vt = np.linalg.svd(M)
        Q = U @ Vt
        new_traces[a:b] = (T2 @ Q).T
    return sd1, replace(sd2, traces=new_traces, vectors=None)


def truncate_data(sd: SpectralData, K: int) -> SpectralData:
    """First K eigenpairs of a dataset."""
    if not 1 <= K <= sd.K:
        raise ValidationError(f"need 1 <= K <= {sd.K}, got {K}")
    return replace(
        sd, eigenvalues=sd.eigenvalues[:K], traces=sd.traces[:K],
        vectors=None if sd.vectors is None else sd.vectors[:K],
    )


def trace_l2_norms(sd: SpectralData) -> np.ndarray:
    """L2(Gamma) norm of each stored trace."""
    w = sd.grid.boundary_weights
    return np.sqrt(np.sum(w[None, :] * np.abs(sd.traces) ** 2, axis=1))
