"""Acceptance criteria, one PASS/FAIL line each (see the terminal summary).

The Monte-Carlo grid runs once per session in quick mode (2,000 replications
per cell, fixed seed); set JUMPACT_THREADS to use more worker processes.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from jumpact import (
    EstimatorConfig,
    c_beta,
    calibrate_theta,
    confidence_interval,
    estimate,
    jump_count,
    sample_standard_stable,
    weights,
)
from jumpact.cli import main
from jumpact.experiment import METHOD_AJ, METHOD_HAT, ExperimentGrid, default_workers, run_cell, run_grid
from jumpact.kernel import compute_k_beta, compute_k_beta_rho, compute_kbar_beta_rho, fourier_moment
from jumpact.simulate import SimulationModel, simulate_path, stream_rng

import oracles

pytestmark = pytest.mark.slow

BETAS = (0.4, 0.8, 1.2, 1.6)
PS = (0.005, 0.01, 0.02)

# published (mean, std, coverage) per (beta, p) for the multi-scale estimator
REFERENCE_HAT = {
    (0.4, 0.005): (0.39, 0.13, 0.91), (0.4, 0.01): (0.39, 0.09, 0.92), (0.4, 0.02): (0.39, 0.07, 0.91),
    (0.8, 0.005): (0.81, 0.26, 0.92), (0.8, 0.01): (0.80, 0.18, 0.93), (0.8, 0.02): (0.79, 0.13, 0.93),
    (1.2, 0.005): (1.22, 0.40, 0.93), (1.2, 0.01): (1.22, 0.29, 0.94), (1.2, 0.02): (1.20, 0.21, 0.92),
    (1.6, 0.005): (1.54, 0.43, 0.93), (1.6, 0.01): (1.58, 0.36, 0.93), (1.6, 0.02): (1.57, 0.31, 0.92),
}


@pytest.fixture(scope="module")
def quick_table():
    grid = ExperimentGrid(betas=BETAS, ps=PS, reps=2000, base_seed=0)
    start = time.perf_counter()
    table = run_grid(grid, workers=default_workers())
    print(f"quick grid: {time.perf_counter() - start:.0f} s")
    return {(s.beta_true, s.p, s.method): s for s in table}


def test_table_reproduction(quick_table, acceptance_report):
    misses = []
    for (beta, p), (mean, std, cov) in REFERENCE_HAT.items():
        s = quick_table[(beta, p, METHOD_HAT)]
        ok = (abs(s.mean - mean) <= 0.05 and abs(s.std_dev / std - 1) <= 0.25
              and abs(s.coverage - cov) <= 0.03)
        if not ok:
            misses.append(f"beta={beta} p={p}: {s.mean:.3f}/{s.std_dev:.3f}/{s.coverage:.3f}"
                          f" vs {mean}/{std}/{cov}")
    worst = max(abs(quick_table[(b, p, METHOD_HAT)].coverage - REFERENCE_HAT[(b, p)][2])
                for b, p in REFERENCE_HAT)
    assert acceptance_report("multi-scale table: mean +-0.05, std +-25%, coverage +-0.03 in 12 cells",
                             not misses, "; ".join(misses) or f"worst coverage gap {worst:.3f}")


def test_comparator_contrast(quick_table, acceptance_report):
    aj = quick_table[(1.6, 0.005, METHOD_AJ)]
    ok_cell = abs(aj.mean - 0.91) <= 0.15 and abs(aj.coverage - 0.53) <= 0.05
    acceptance_report("comparator cell beta=1.6 p=0.5%: mean +-0.15 of 0.91, coverage +-0.05 of 0.53",
                      ok_cell, f"mean {aj.mean:.3f}, coverage {aj.coverage:.3f}")
    worse = [(b, p) for b in BETAS for p in PS
             if not quick_table[(b, p, METHOD_HAT)].rmse < quick_table[(b, p, METHOD_AJ)].rmse]
    ratios = [quick_table[(b, p, METHOD_HAT)].rmse / quick_table[(b, p, METHOD_AJ)].rmse
              for b in BETAS for p in PS]
    ok_rmse = not worse
    acceptance_report("multi-scale RMSE below comparator RMSE in all 12 cells", ok_rmse,
                      f"max ratio {max(ratios):.3f}" if ok_rmse else f"fails at {worse}")
    assert ok_cell and ok_rmse


def test_clt(quick_table, acceptance_report):
    ks = {}
    for beta in (0.4, 0.8, 1.2):
        u = quick_table[(beta, 0.01, METHOD_HAT)].defined_u
        ks[beta] = stats.kstest(u, "norm").statistic
    ok = all(v < 0.1 for v in ks.values())
    assert acceptance_report("standardised error KS < 0.1 at beta 0.4, 0.8, 1.2 (p=1%)", ok,
                             ", ".join(f"{b}: {v:.3f}" for b, v in ks.items()))


def _timed(f):
    start = time.perf_counter()
    value = f()
    return value, time.perf_counter() - start


def test_constants_identities(acceptance_report):
    variance, t_var = _timed(lambda: max(
        abs(compute_k_beta_rho(b, r) / r**b
            - ((1 + r**-b) * compute_kbar_beta_rho(b, 1.0) - 2 * r ** (-b / 2) * compute_kbar_beta_rho(b, r)))
        / (compute_k_beta_rho(b, r) / r**b)
        for b in np.round(np.arange(0.2, 1.81, 0.2), 1) for r in (1.5, 2.0, 3.0)))
    levy, t_levy = _timed(lambda: max(
        abs(oracles.levy_exponent_integral(b, u) / (0.5 * c_beta(b) * u**b) - 1)
        for b in (0.5, 1.0, 1.5) for u in (0.7, 1.0, 3.0)))
    fourier, t_fourier = _timed(lambda: max(
        abs(fourier_moment(b) / (2 * math.pi * compute_k_beta(b)) - 1) for b in (0.4, 0.8, 1.2, 1.6)))
    ok = variance < 1e-5 and levy < 1e-4 and fourier < 1e-3
    acceptance_report("constants: variance identity 1e-5, Levy exponent 1e-4, Fourier 1e-3", ok,
                      f"{variance:.1e}, {levy:.1e}, {fourier:.1e}")
    times = (t_var, t_levy, t_fourier)
    fast = all(t < 1.0 for t in times)
    acceptance_report("constants identities each sub-second", fast,
                      ", ".join(f"{t:.2f} s" for t in times))
    assert ok and fast


def test_weight_identities(acceptance_report):
    exact = [Fraction((-1) ** (k + 1) * math.comb(3, k), 2 * k) for k in (1, 2, 3)]
    ok = (exact == [Fraction(3, 2), Fraction(-3, 4), Fraction(1, 6)]
          and list(weights(3)) == [1.5, -0.75, 1 / 6]
          and all(abs(2 * sum(k * w for k, w in enumerate(weights(m), 1)) - 1) <= 4 * np.finfo(float).eps
                  for m in range(1, 9)))
    assert acceptance_report("weights: 2 sum k w_k = 1, w(3) = [3/2, -3/4, 1/6]", ok)


def test_estimator_trivial_cases(acceptance_report):
    cfg = EstimatorConfig()
    paths = [np.zeros(1000), np.full(1000, -2.5), 0.3 + 1e-3 * np.arange(1000.0)]
    ok_paths = all(estimate(x, cfg).beta_hat == 0.0 and confidence_interval(estimate(x, cfg)).empty
                   for x in paths)
    x = simulate_path(SimulationModel(1.2, 0.01, n=4000, seed=1))[1]
    ok_scale = all(jump_count(s * x, 3.1 / s, 3) == jump_count(x, 3.1, 3) for s in (0.25, 2.0, 8.0))
    assert acceptance_report("estimator: constant/affine paths give 0 with empty CI; "
                             "dyadic scale covariance bitwise", ok_paths and ok_scale)


def test_simulator_suite(acceptance_report, tmp_path):
    cf = max(abs(np.mean(np.cos(u * x)) - math.exp(-(u**a)))
             for a in (0.8, 1.5)
             for x in [sample_standard_stable(a, stream_rng(2, 0, int(a * 10)), 1_000_000)]
             for u in (0.5, 1.0, 2.0))
    n, p = 23_400, 0.01
    theta = calibrate_theta(0.8, p, n)
    _, has_big = oracles.jump_explicit_increments(
        theta, 0.8, n, 100_000, np.random.default_rng(11), cutoff=0.05 * theta * n**-1.25)
    freq = has_big.mean()

    argv = ["experiment", "--betas", "0.8,1.6", "--ps", "0.01", "--reps", "12"]
    main(argv + ["--threads", "1", "--out", str(tmp_path / "t1")])
    main(argv + ["--threads", "3", "--out", str(tmp_path / "t3")])
    same = all((tmp_path / "t1" / f.name).read_bytes() == f.read_bytes()
               for f in (tmp_path / "t3").iterdir())

    ok = cf < 0.01 and abs(freq - p) <= 0.002 and same
    assert acceptance_report("simulator: CF error < 0.01, jump frequency +-0.002, "
                             "CSV bytes equal across worker counts", ok,
                             f"CF {cf:.4f}, frequency {freq:.4f}, bytes equal {same}")


def test_rate_note(acceptance_report):
    """CI width shrinks like tau_n^(-beta/2) as n grows (informational at +-30%).

    The per-increment jump probability is rescaled with n so that the
    process, and hence theta, stays the one calibrated at n = 23,400.
    """
    beta, reps = 0.8, 300
    lam = -math.log1p(-0.01) * 23_400
    widths = {}
    for n in (5850, 23_400, 93_600):
        p = -math.expm1(-lam / n)
        grid = ExperimentGrid(betas=(beta,), ps=(p,), reps=reps, n=n)
        cfg = grid.config
        w = []
        for r in range(reps):
            model = SimulationModel(beta, p, n=n, seed=grid.cell_seed(beta, p))
            ci = confidence_interval(estimate(simulate_path(model, r)[1], cfg))
            if not ci.empty:
                w.append(ci.hi - ci.lo)
        widths[n] = (np.median(w), cfg.tau(n))
    ratios = []
    for a, b in ((5850, 23_400), (23_400, 93_600)):
        observed = widths[b][0] / widths[a][0]
        predicted = (widths[b][1] / widths[a][1]) ** (-beta / 2)
        ratios.append(observed / predicted)
    ok = all(abs(r - 1) <= 0.3 for r in ratios)
    assert acceptance_report("note: CI width ratios match tau_n^(-beta/2) within 30%", ok,
                             ", ".join(f"{r:.2f}" for r in ratios))
