"""Stability experiments: spectral-data distances and Hoelder exponents.

delta0 is the sup distance of (shifted) eigenvalue sequences, delta1 the
weighted l1 distance of normal-derivative trace differences; the theorems
bound ||q1-q2||_{L2} by C*(delta0+delta1)^gamma with an explicit, very
small gamma.  The experiments measure the empirical exponent on potential
families and under worst-case asymptotic noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import ValidationError
from .grid import GridSpec, Potential
from .potentials import zero
from .probe import reconstruct_potential
from .spectral import (
    SpectralData,
    align_traces,
    solve_eigen,
    truncate_data,
    weyl_validate,
)

# extra eigenpairs solved beyond K so that a degenerate cluster straddling
# the truncation boundary is aligned as a whole before trimming
_CLUSTER_BUFFER = 8


@dataclass
class DeltaMetrics:
    """The distance delta = delta0 + delta1 between two spectral datasets."""

    delta0: float       # sup_k |lambda_{k+N}(q1) - lambda_{k+N}(q2)|
    delta1: float       # sum_k k^(-2m/n) ||trace diff_{k+N}||_{L2(Gamma)}
    delta: float
    N: int              # dropped leading pairs
    m: int
    K: int              # truncation of the delta1 series
    tail_bound: float


@dataclass
class ExponentBundle:
    """Closed-form exponents of the stability theorems (n=2 geometry)."""

    n: int
    m: int
    eps: float
    sigma: float            # (1 - 2 eps)/4
    kappa: float            # 1/(2 sigma)
    gamma: float            # 1/(n+2+2(n+2)(kappa m + m + 5/4))
    gamma_alt: float        # variant with m+2 in place of m+5/4
    alpha_threshold: float  # (4m-1)/(2n)


def gamma_of(n: int, m: int, eps: float) -> ExponentBundle:
    """Evaluate the explicit Hoelder exponent and its companions."""
    if not 0.0 < eps < 0.5:
        raise ValidationError(f"need 0 < eps < 1/2, got {eps}")
    if not m > n / 2.0 + 0.75:
        raise ValidationError(f"need m > n/2 + 3/4, got m={m}, n={n}")
    sigma = (1.0 - 2.0 * eps) / 4.0
    kappa = 1.0 / (2.0 * sigma)
    gamma = 1.0 / (n + 2 + 2 * (n + 2) * (kappa * m + m + 1.25))
    gamma_alt = 1.0 / (n + 2 + 2 * (n + 2) * (kappa * m + m + 2.0))
    if not (0.0 < gamma < 1.0 and kappa > 1.0):
        raise ValidationError(
            f"exponent constraints violated: gamma={gamma}, kappa={kappa}"
        )
    return ExponentBundle(
        n=n, m=m, eps=eps, sigma=sigma, kappa=kappa, gamma=gamma,
        gamma_alt=gamma_alt, alpha_threshold=(4.0 * m - 1.0) / (2.0 * n),
    )


def _delta1_tail_bound(sd1: SpectralData, sd2: SpectralData, N: int, m: int,
                       K: int) -> float:
    """A-priori bound on the dropped delta1 terms k > K - N.

    Triangle inequality plus the fitted trace-growth constants:
    ||t1 - t2|| <= 2 C (c_up (k+N))^(3/4+eps/2), weight k^(-2m/n) at n=2.
    The series converges only like k^(3/4+eps/2-2m/n+1), so the bound is
    honest but large at desk-scale K.
    """
    w1 = weyl_validate(sd1, m=m)
    w2 = weyl_validate(sd2, m=m)
    C = max(w1.trace_constant, w2.trace_constant)
    c_up = max(w1.c_upper, w2.c_upper)
    eps = w1.eps
    p = 0.75 + eps / 2.0
    expo = -m  # n = 2: weight k^(-2m/n) = k^(-m)

    def term(k):
        return 2.0 * C * (c_up * (k + N)) ** p * k ** expo

    if expo + p >= -1.0:
        raise ValidationError(
            f"delta1 series diverges a priori: m={m} too small for eps={eps}"
        )
    k0 = K - N
    val, _ = scipy.integrate.quad(term, k0, np.inf, limit=200)
    return float(term(k0) + val)


def compute_delta(sd1: SpectralData, sd2: SpectralData, N: int = 0,
                  m: int = 2) -> DeltaMetrics:
    """delta0, delta1 and the tail bound for two aligned spectral datasets."""
    if sd1.K != sd2.K or sd1.grid != sd2.grid:
        raise ValidationError("delta needs spectral data on one grid, equal K")
    K = sd1.K
    if K <= N + 20:
        raise ValidationError(f"need K > N + 20, got K={K}, N={N}")
    l1 = sd1.eigenvalues[N:]
    l2 = sd2.eigenvalues[N:]
    delta0 = float(np.max(np.abs(l1 - l2)))
    w = sd1.grid.boundary_weights
    diff = sd1.traces[N:] - sd2.traces[N:]
    norms = np.sqrt(np.sum(w[None, :] * diff**2, axis=1))
    k = np.arange(1, K - N + 1, dtype=float)
    delta1 = float(np.sum(k ** (-float(m)) * norms))  # n=2: 2m/n = m
    tail = _delta1_tail_bound(sd1, sd2, N, m, K)
    return DeltaMetrics(
        delta0=delta0, delta1=delta1, delta=delta0 + delta1, N=N, m=m, K=K,
        tail_bound=tail,
    )


def _fit_loglog(x: np.ndarray, y: np.ndarray):
    """(slope, intercept) of log y against log x."""
    c = np.polyfit(np.log(x), np.log(y), 1)
    return float(c[0]), float(c[1])


def holder_experiment(family, N: int, m: int, grid: GridSpec, K: int,
                      eps: float = 0.25, delta_max: float = 0.5) -> dict:
    """Empirical Hoelder exponent over a family of potential pairs.

    family is a list of (q1, q2) Potential pairs.  Returns the scatter of
    (delta, ||q1-q2||_{L2}), the fitted exponent gamma_emp on points with
    delta < delta_max, and the smallest C with ||q1-q2|| <= C delta^gamma_emp.
    """
    if len(family) < 5:
        raise ValidationError(f"need at least 5 pairs, got {len(family)}")
    bundle = gamma_of(2, m, eps)
    cache: dict[str, SpectralData] = {}

    def solved(q: Potential) -> SpectralData:
        if q.name not in cache:
            cache[q.name] = solve_eigen(q, grid, K + _CLUSTER_BUFFER)
        return cache[q.name]

    rows = []
    for pid, (q1, q2) in enumerate(family):
        sd1, sd2 = align_traces(solved(q1), solved(q2))
        dm = compute_delta(truncate_data(sd1, K), truncate_data(sd2, K),
                           N=N, m=m)
        l2 = Potential(q1.values - q2.values, sup_bound=np.inf,
                       name="diff").l2_norm(grid)
        rows.append({"pair_id": pid, "delta0": dm.delta0, "delta1": dm.delta1,
                     "delta": dm.delta, "l2_diff": l2,
                     "tail_bound": dm.tail_bound})
    deltas = np.array([r["delta"] for r in rows])
    l2s = np.array([r["l2_diff"] for r in rows])
    keep = (deltas > 0) & (l2s > 0) & (deltas < delta_max)
    out = {
        "rows": rows, "N": N, "m": m, "K": K,
        "gamma_paper": bundle.gamma, "degenerate": False,
        "gamma_emp": None, "C_fit": None,
    }
    if keep.sum() < 2:
        out["degenerate"] = True
        return out
    gamma_emp, _ = _fit_loglog(deltas[keep], l2s[keep])
    C_fit = float(np.max(l2s[keep] / deltas[keep] ** gamma_emp))
    out.update(gamma_emp=gamma_emp, C_fit=C_fit,
               passes=bool(gamma_emp >= bundle.gamma))
    return out


def _corrupt(sd: SpectralData, delta: float, A: float, alpha: float,
             m: int) -> SpectralData:
    """Worst-case corruption saturating the asymptotic noise bounds.

    Adds delta + A k^(-alpha) to every eigenvalue, and a fixed-direction
    trace perturbation of norm (delta + A k^(-alpha)) k^(2m/n-1), so both
    hypothesis inequalities hold with equality.
    """
    g = sd.grid
    k = np.arange(1, sd.K + 1, dtype=float)
    bound = delta + A * k**-alpha
    # fixed smooth unit-norm direction on the boundary
    s = g.boundary_arclength
    u = np.cos(2.0 * np.pi * s / g.perimeter)
    u = u / np.sqrt(np.sum(g.boundary_weights * u**2))
    scale = bound * k ** (float(m) - 1.0)  # n=2: 2m/n - 1 = m - 1
    return SpectralData(
        eigenvalues=sd.eigenvalues + bound,
        traces=sd.traces + scale[:, None] * u[None, :],
        grid=g, potential_id=f"{sd.potential_id}+noise", vectors=None,
    )


def asymptotic_noise_experiment(
    q1: Potential, q2: Potential, deltas, A: float, alpha: float, m: int,
    grid: GridSpec, K: int, tau: float = 10.0,
    cutoff_multiplier: float = 10.0, N_drop_test: int = 5,
) -> dict:
    """Recovery error under worst-case asymptotically-small noise.

    Corrupts the q1 dataset to saturate |dlambda_k| = delta + A k^(-alpha)
    (and likewise for the weighted traces), reconstructs q1 - q2 through
    the spectral probe for each delta with N(delta) = delta^(-1/alpha)
    leading pairs classified as the well-determined block, and reports the
    error sweep plus the exact-pair-dropping comparison.
    """
    bundle = gamma_of(2, m, eps=0.25)
    if alpha <= bundle.alpha_threshold:
        raise ValidationError(
            f"need alpha > {bundle.alpha_threshold}, got {alpha}"
        )
    sd1 = solve_eigen(q1, grid, K + _CLUSTER_BUFFER)
    sd2 = solve_eigen(q2, grid, K + _CLUSTER_BUFFER)
    sd1, sd2 = align_traces(sd1, sd2)
    sd1, sd2 = truncate_data(sd1, K), truncate_data(sd2, K)
    q_diff = Potential(q1.values - q2.values, sup_bound=np.inf, name="diff")

    def run(sd_meas, n_drop=0):
        _, rep = reconstruct_potential(
            q_diff, tau, grid, source="spectral", sd=sd_meas, sd0=sd2,
            cutoff_multiplier=cutoff_multiplier, N_drop=n_drop,
        )
        return rep["l2_error"]

    baseline = run(sd1)
    rows = []
    for d in deltas:
        err = run(_corrupt(sd1, d, A, alpha, m))
        rows.append({"delta": d, "N_of_delta": int(round(d ** (-1.0 / alpha))),
                     "l2_error": err})
    dropped = run(sd1, n_drop=N_drop_test)
    ds = np.array([r["delta"] for r in rows])
    es = np.array([r["l2_error"] for r in rows])
    gamma_fit = None
    if len(rows) >= 2 and np.all(es > 0):
        gamma_fit, _ = _fit_loglog(ds, es)
    return {
        "rows": rows, "baseline_error": baseline,
        "dropped_pairs_error": dropped, "N_drop_test": N_drop_test,
        "gamma_fit": gamma_fit, "alpha": alpha, "A": A, "m": m, "K": K,
        "tau": tau,
    }
