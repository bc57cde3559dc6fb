"""Acceptance gate: the ten primary criteria, one printed verdict line each.

Each test evaluates its criterion at the stated scale and tolerance, prints
a single PASS/FAIL line to the live terminal (bypassing capture), and then
asserts.  Shared heavy solves are module-scoped fixtures.
"""

import sys
import time

import numpy as np
import pytest

from borglev.dtn import (
    dtn_derivative_series,
    dtn_difference_series,
    dtn_direct,
    dtn_divided_difference,
    operator_l2_norm,
    split_hat_tilde,
    verify_dtn_decay,
)
from borglev.grid import build_grid
from borglev.lemmas import (
    LemmaQuery,
    check_lemma1,
    check_lemma2,
    check_lemma3,
    i_sharp,
    i_sharp_closed_b0_nu2,
)
from borglev.potentials import fourier_mode, gaussian, mode, scale, zero
from borglev.probe import (
    direct_fourier,
    make_geometry,
    probe_remainder_decay,
    reconstruct_potential,
    recover_fourier,
    verify_identity_3_1,
)
from borglev.spectral import align_traces, solve_eigen, truncate_data, weyl_validate
from borglev.stability import (
    asymptotic_noise_experiment,
    compute_delta,
    gamma_of,
    holder_experiment,
)


def verdict(num, ok, detail):
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {detail}"
    print(line, file=sys.__stdout__, flush=True)
    return line


@pytest.fixture(scope="module")
def grid40():
    return build_grid(1.0, 1.0, 40, 40)


@pytest.fixture(scope="module")
def grid48():
    return build_grid(1.0, 1.0, 48, 48)


@pytest.fixture(scope="module")
def grid96():
    return build_grid(1.0, 1.0, 96, 96)


@pytest.fixture(scope="module")
def gauss32_pair():
    """Aligned (gaussian, zero) spectra at 32^2, K=400 after cluster trim."""
    g = build_grid(1.0, 1.0, 32, 32)
    q = gaussian(g, (0.5, 0.5), 0.12, 2.0)
    sd1 = solve_eigen(q, g, 408)
    sd0 = solve_eigen(zero(g), g, 408)
    sd1, sd0 = align_traces(sd1, sd0)
    return g, q, truncate_data(sd1, 400), truncate_data(sd0, 400)


def test_criterion_01_forward_spectra(grid40):
    t0 = time.perf_counter()
    sd = solve_eigen(zero(grid40), grid40, 50)
    jj, kk = np.meshgrid(np.arange(1, 30), np.arange(1, 30))
    exact = np.sort((np.pi**2 * (jj**2 + kk**2)).ravel())[:20]
    rel = np.max(np.abs(sd.eigenvalues[:20] - exact) / exact)
    ok_eigs = rel <= 1e-2

    q = gaussian(grid40, (0.5, 0.5), 0.12, 2.0)
    sd_q = solve_eigen(q, grid40, 50)
    from borglev.grid import Potential
    shifted = Potential(q.values + 2.5, sup_bound=q.sup_bound + 2.5,
                        name="shifted")
    sd_s = solve_eigen(shifted, grid40, 50)
    shift_err = np.max(np.abs(sd_s.eigenvalues - sd_q.eigenvalues - 2.5))
    ok_shift = shift_err <= 1e-10
    elapsed = time.perf_counter() - t0
    ok_time = elapsed <= 60.0

    ok = ok_eigs and ok_shift and ok_time
    verdict(1, ok, f"max eig rel err {rel:.3%} (<=1%: {ok_eigs}), "
                   f"shift err {shift_err:.2e}, {elapsed:.1f}s")
    # The 5-point stencil's O(h^2 lambda^2) truncation error reaches 1.17%
    # on the (1,5)-type modes among the first 20 at nx=40; this clause is
    # reported faithfully rather than relaxed.
    assert ok_shift and ok_time
    assert ok_eigs, f"first-20 eigenvalue error {rel:.4%} exceeds 1%"


def test_criterion_02_weyl_constants(grid40):
    sd = solve_eigen(gaussian(grid40, (0.5, 0.5), 0.12, 2.0), grid40, 200)
    rep = weyl_validate(sd)
    dev = abs(rep.c_n * 4.0 * np.pi - 1.0)
    ok_cn = dev <= 0.10
    # the fitted trace constant realizes the bound on the whole window
    lo, hi = rep.fit_range
    w = grid40.boundary_weights
    norms = np.sqrt(np.sum(w[None, :] * sd.traces[:hi] ** 2, axis=1))
    bound = rep.trace_constant * sd.eigenvalues[:hi] ** (0.75 + rep.eps / 2)
    ok_tr = np.isfinite(rep.trace_constant) and np.all(norms <= bound * (1 + 1e-12))
    ok_an = np.isfinite(rep.A_n)
    ok = ok_cn and ok_tr and ok_an
    verdict(2, ok, f"c_n dev {dev:.1%} (<=10%), trace C {rep.trace_constant:.3f}, "
                   f"A_n {rep.A_n:.3f}")
    assert ok


def test_criterion_03_series_vs_direct(gauss32_pair):
    g, q, sd1, sd0 = gauss32_pair
    rep = weyl_validate(sd1)
    der = dtn_derivative_series(sd1, -10.0, 2, weyl=rep)
    oracle = dtn_divided_difference(q, -10.0, g, 2)
    rel_d = (operator_l2_norm(der.entries - oracle, g)
             / operator_l2_norm(oracle, g))
    tol_d = max(1e-3, der.meta["tail_bound"])
    ok_d = rel_d <= tol_d

    lam = complex(4.0, 1.0) ** 2
    diff = dtn_difference_series(sd1, sd0, lam)
    direct = (dtn_direct(q, lam, g).entries
              - dtn_direct(zero(g), lam, g).entries)
    rel_f = (operator_l2_norm(diff.entries - direct, g)
             / operator_l2_norm(direct, g))
    ok_f = rel_f <= 5e-2
    ok = ok_d and ok_f
    verdict(3, ok, f"derivative rel {rel_d:.2e} (tol {tol_d:.2e}), "
                   f"difference rel {rel_f:.2e} (<=5e-2)")
    assert ok


def test_criterion_04_dtn_decay(gauss32_pair):
    g, q, _, _ = gauss32_pair
    q2 = mode(g, 1, 1, 0.8)
    rep = verify_dtn_decay(q, q2, g, 2, 0.25, [-20.0, -40.0, -80.0, -160.0])
    details, ok = [], True
    for j in range(3):
        entry = rep["orders"][j]
        ok = ok and entry["passes"]
        details.append(f"j={j}: {entry['slope']:.2f}<={entry['predicted'] + 0.1:.2f}")
    verdict(4, ok, ", ".join(details))
    assert ok


def test_criterion_05_isozaki_identity(grid96, grid48):
    q96 = gaussian(grid96, (0.5, 0.5), 0.12, 2.0)
    geom = make_geometry([2 * np.pi, 0.0], 6.0)
    rep = verify_identity_3_1(q96, geom, grid96)
    ok_res = rep["residual"] <= 2e-2

    q48 = gaussian(grid48, (0.5, 0.5), 0.12, 2.0)
    dec = probe_remainder_decay(q48, [np.pi, 0.0], [3, 4, 6, 8, 12], grid48)
    ok_slope = dec["slope"] <= -0.8
    ok = ok_res and ok_slope
    verdict(5, ok, f"identity residual {rep['residual']:.2e} (<=2e-2), "
                   f"remainder slope {dec['slope']:.2f} (<=-0.8)")
    assert ok


def test_criterion_06_fourier_recovery(grid48, grid96):
    t0 = time.perf_counter()
    q48 = gaussian(grid48, (0.5, 0.5), 0.12, 2.0)
    xi = np.array([np.pi, 0.0])
    taus = [4.0, 6.0, 8.0, 12.0]
    errs = []
    for tau in taus:
        s = recover_fourier(q48, xi, tau, grid48)
        ref = direct_fourier(q48, s.zeta, grid48)
        errs.append(abs(s.value - ref.value))
    slope = float(np.polyfit(np.log(taus), np.log(errs), 1)[0])
    ok_slope = slope <= -0.8

    q96 = gaussian(grid96, (0.5, 0.5), 0.12, 2.0)
    rec_errs = [
        reconstruct_potential(q96, tau, grid96, cutoff_multiplier=10.0)[1]["l2_error"]
        for tau in (6.0, 10.0, 14.0)
    ]
    ok_mono = rec_errs[0] > rec_errs[1] > rec_errs[2]
    elapsed = time.perf_counter() - t0
    ok_time = elapsed <= 900.0
    ok = ok_slope and ok_mono and ok_time
    verdict(6, ok, f"sample slope {slope:.2f} (<=-0.8), reconstruction errors "
                   f"{rec_errs[0]:.3f}>{rec_errs[1]:.3f}>{rec_errs[2]:.3f}, "
                   f"{elapsed:.0f}s")
    assert ok


def test_criterion_07_hat_tilde_split(gauss32_pair):
    g, _, sd1, _ = gauss32_pair
    taus = [5.0, 10.0, 20.0, 40.0]
    norms = []
    for tau in taus:
        hat, _ = split_hat_tilde(sd1, complex(tau, 1.0) ** 2, 5)
        norms.append(operator_l2_norm(hat.entries, g))
    slope = float(np.polyfit(np.log(taus), np.log(norms), 1)[0])
    ok = slope <= -1.8
    verdict(7, ok, f"||hat Lambda|| slope {slope:.2f} (<=-1.8, N=5)")
    assert ok


def test_criterion_08_lemma_sweeps():
    taus = np.geomspace(8.0, 256.0, 9)
    failures = []
    for mu, nu in [(0.0, 2.0), (-0.5, 1.0), (-2.0, 1.0)]:
        rep = check_lemma1(LemmaQuery(mu=mu, nu=nu, K_cut=100_000), taus)
        if not rep.passes:
            failures.append(f"L1({mu},{nu})")
    for b, nu in [(0.0, 2.0), (-0.5, 1.0), (-2.0, 1.0)]:
        rep = check_lemma2(b, nu, taus)
        if not rep.passes:
            failures.append(f"L2({b},{nu})")
    for mu, nu, nu2 in [(-2.0, 1.0, None), (-2.0, 1.0, 1.0), (0.0, 2.0, None)]:
        rep = check_lemma3(LemmaQuery(mu=mu, nu=nu, K_cut=100_000),
                           [-2.0, -8.0, -32.0, -128.0], nu2=nu2)
        if not rep.passes:
            failures.append(f"L3({mu},{nu},{nu2})")
    closed_err = max(
        abs(i_sharp(0.0, 2.0, t) - i_sharp_closed_b0_nu2(t))
        / i_sharp_closed_b0_nu2(t)
        for t in (8.0, 64.0, 256.0)
    )
    ok_closed = closed_err <= 1e-9
    ok = not failures and ok_closed
    verdict(8, ok, f"9 regime sweeps {'all pass' if not failures else failures}, "
                   f"closed-form rel err {closed_err:.1e} (<=1e-9)")
    assert ok


def test_criterion_09_holder_stability(grid40, grid16):
    bump = mode(grid40, 2, 3, 1.0)
    family = [(scale(bump, t), zero(grid40))
              for t in (0.05, 0.1, 0.2, 0.4, 0.6, 0.8)]
    rep = holder_experiment(family, N=0, m=2, grid=grid40, K=200)
    gamma = rep["gamma_emp"]
    bundle = gamma_of(2, 2, 0.25)
    ok_gamma = (gamma is not None and 0.0 < gamma <= 1.0
                and gamma >= bundle.gamma)
    assert bundle.gamma == pytest.approx(1.0 / 94.0, abs=1e-15)

    # pseudometric and N-monotonicity invariants of the delta metrics
    sds = [solve_eigen(p, grid16, 60) for p in
           (zero(grid16), mode(grid16, 2, 3, 0.3), mode(grid16, 1, 1, 0.5))]
    d_ab, d_bc = compute_delta(sds[0], sds[1]), compute_delta(sds[1], sds[2])
    d_ac = compute_delta(sds[0], sds[2])
    d_ba = compute_delta(sds[1], sds[0])
    ok_metric = (
        compute_delta(sds[0], sds[0]).delta == 0.0
        and abs(d_ab.delta - d_ba.delta) <= 1e-10
        and d_ac.delta <= d_ab.delta + d_bc.delta + 1e-10
        and all(compute_delta(sds[0], sds[1], N=N1).delta0 + 1e-10
                >= compute_delta(sds[0], sds[1], N=N2).delta0
                for N1, N2 in ((0, 5), (5, 10)))
    )
    ok = ok_gamma and ok_metric
    verdict(9, ok, f"gamma_emp {gamma:.3f} in (1/94, 1], "
                   f"invariants {'hold' if ok_metric else 'violated'}")
    assert ok


def test_criterion_10_asymptotic_noise(grid40):
    rep = asymptotic_noise_experiment(
        fourier_mode(grid40, 1, 1, 1.0), zero(grid40),
        [1e-1, 3e-2, 1e-2], A=1.0, alpha=2.0, m=2, grid=grid40, K=200,
        tau=10.0, cutoff_multiplier=10.0, N_drop_test=5)
    errs = [r["l2_error"] for r in rep["rows"]]
    ok_mono = all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))
    base = rep["baseline_error"]
    ok_drop = abs(rep["dropped_pairs_error"] - base) <= 2.0 * base
    ok = ok_mono and ok_drop
    verdict(10, ok, f"errors {errs[0]:.2f}>={errs[1]:.2f}>={errs[2]:.2f}, "
                    f"dropped {rep['dropped_pairs_error']:.3f} vs baseline "
                    f"{base:.3f} (<=2x)")
    assert ok
