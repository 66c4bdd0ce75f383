"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL`` line; the lines are printed in
pytest's terminal summary and when this file is run directly.
"""

import itertools
import math
import time
import warnings
from collections import Counter

import numpy as np
import pytest

from milambda.bds import BdsConfig, bds_statistic, correlation_integral
from milambda.core_stats import PairedSample, pearson, spearman
from milambda.datagen import (
    SeededStream,
    gen_anscombe_like,
    gen_binary_markov,
    gen_bivariate_normal,
    gen_exponential,
)
from milambda.errors import ConstantSeries, NoDependence
from milambda.experiments import crossover_sweep
from milambda.info import (
    DiscretizedSeries,
    binary_correlation_function,
    binary_mi_approx,
    entropy_of,
    equal_frequency_bins,
    gaussian_mi,
    joint_histogram,
    lagged_binary_mi,
    mutual_information,
)
from milambda.pipeline import LambdaConfig, compute_lambda, lambda_profile, quantile_transform

RESULTS: dict[int, str] = {}
N = 10_000
SEEDS = range(20)


def record(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_criterion_01_gaussian_oracle():
    parts, ok = [], True
    for rho in (0.3, 0.6, 0.9):
        vals = []
        for seed in SEEDS:
            s = gen_bivariate_normal(rho, N, seed)
            vals.append(mutual_information(equal_frequency_bins(s.x, 50), equal_frequency_bins(s.y, 50)))
        med, target = float(np.median(vals)), gaussian_mi(rho)
        ok &= abs(med - target) <= 0.1
        parts.append(f"rho={rho}: {med:.4f} vs {target:.4f}")
    record(1, ok, "; ".join(parts) + " (tol 0.1 nats)")


def test_criterion_02_anscombe_pattern():
    lams, rhos = {}, {}
    for panel in (1, 2, 3, 4):
        s = gen_anscombe_like(panel, N, seed=0)
        rhos[panel] = pearson(s.x, s.y)
        lams[panel] = compute_lambda(s).lam
    ok = lams[1] >= 0.9 and lams[2] <= 0.2 and all(abs(r - 0.693) <= 0.02 for r in rhos.values())
    detail = ", ".join(f"panel {p}: rho={rhos[p]:.4f} Lambda={lams[p]:.3f}" for p in lams)
    record(2, ok, detail + " (need L1 >= 0.9, L2 <= 0.2)")


def test_criterion_03_exponential_profile():
    profiles = np.array([[r.lam for r in lambda_profile(gen_exponential(N, seed))] for seed in SEEDS])
    med = np.median(profiles, axis=0)
    targets = [(0.43, 0.10), (0.84, 0.08), (0.98, 0.03)]
    checks = [abs(m - t) <= tol for m, (t, tol) in zip(med, targets)]
    detail = ", ".join(
        f"L{k + 1}={m:.3f} (target {t}+-{tol}){'' if c else ' MISS'}"
        for k, (m, (t, tol), c) in enumerate(zip(med, targets, checks))
    )
    record(3, all(checks), detail)


@pytest.mark.slow
def test_criterion_04_bds_lambda_crossover():
    t0 = time.perf_counter()
    parts, ok = [], True
    grids = {2: np.round(np.arange(0.0, 0.401, 0.02), 4), 3: np.round(np.arange(0.0, 0.201, 0.01), 4)}
    for order, grid in grids.items():
        res = crossover_sweep(order, grid, SEEDS, n=N, bds_config=BdsConfig(2, 0.5),
                              stop_at_crossover=True)
        lam = res.crossover_lambda
        hit = lam is not None and 0.92 <= lam <= 0.98
        ok &= hit
        lam_s = "none" if lam is None else f"{lam:.4f}"
        parts.append(f"order {order}: a*={res.crossover_a} Lambda={lam_s} "
                     f"(a=0 reject {res.rows[0].reject_fraction:.2f})")
    record(4, ok, "; ".join(parts) + f" (band [0.92, 0.98], {time.perf_counter() - t0:.0f}s)")


@pytest.mark.slow
def test_criterion_05_bds_null_calibration():
    rejects = 0
    for seed in range(200):
        if bds_statistic(SeededStream(50_000 + seed).normal(N), BdsConfig(2, 0.5)).p_value < 0.05:
            rejects += 1
    rate = rejects / 200
    record(5, 0.02 <= rate <= 0.08, f"rejection rate {rate:.3f} over 200 seeds (band [0.02, 0.08])")


def test_criterion_06_marginal_entropy_preservation():
    bad = 0
    for seed in range(100):
        r = np.random.default_rng(seed)
        n = int(r.integers(100, 3000))
        y = r.standard_t(2, n) * r.uniform(0.1, 10)
        z = r.normal(size=n)
        assert np.unique(z).size == n
        yp = quantile_transform(y, z)
        m = max(2, min(50, n // 20))
        hy = entropy_of(equal_frequency_bins(y, m))
        hyp = entropy_of(equal_frequency_bins(yp, m))
        occ_y = np.sort(equal_frequency_bins(y, m).occupancy())
        occ_yp = np.sort(equal_frequency_bins(yp, m).occupancy())
        bad += hy != hyp or not np.array_equal(occ_y, occ_yp)
    record(6, bad == 0, f"{100 - bad}/100 samples with identical histograms and H(Y') == H(Y)")


def test_criterion_07_rank_property():
    worst_rank = 0.0
    for seed in range(100):
        r = np.random.default_rng(seed)
        y = r.normal(size=500) ** 3
        z = r.normal(size=500)
        worst_rank = max(worst_rank, abs(1.0 - spearman(quantile_transform(y, z), z)))
    datasets = {f"anscombe{p}": gen_anscombe_like(p, N, seed=0) for p in (1, 2, 3, 4)}
    datasets["exponential"] = gen_exponential(N, seed=0)
    mags = {}
    for name, s in datasets.items():
        for rep in lambda_profile(s, max_order=3 if name == "exponential" else 1):
            mags[f"{name}/k{rep.order}"] = abs(rep.rho_x_yprime)
    worst = max(mags, key=mags.get)
    ok = worst_rank == 0.0 and mags[worst] < 0.1
    record(7, ok, f"max |1 - spearman(Y', z)| = {worst_rank:g}; "
                  f"max |pearson(X, Y')| = {mags[worst]:.4f} ({worst})")


def _fuzz_sample(r, kind):
    n = int(r.integers(30, 800))
    x = r.normal(size=n)
    if kind == 0:
        return x, 2 * x + r.normal(size=n) * r.uniform(0.01, 5)
    if kind == 1:
        return r.standard_cauchy(n), r.standard_cauchy(n) + x
    if kind == 2:
        xt = np.round(x * r.uniform(0.5, 3))
        return xt, np.round(xt + r.normal(size=n))
    if kind == 3:
        y = np.full(n, 3.0)
        y[r.integers(0, n, 2)] += 1e-12
        return x, y
    if kind == 4:
        return np.full(n, 1.0) + (np.arange(n) == 0) * 1e-9, r.normal(size=n)
    if kind == 5:
        return x, np.full(n, -2.0)
    if kind == 6:
        return r.pareto(0.8, n), r.pareto(0.8, n) * np.sign(x)
    return x, np.sin(5 * x) + 0.01 * r.normal(size=n)


def test_criterion_08_lambda_bounds():
    r = np.random.default_rng(8)
    counts = Counter()
    violations = 0
    for i in range(1000):
        x, y = _fuzz_sample(r, i % 8)
        config = LambdaConfig(model_order=int(r.integers(1, 4)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            try:
                rep = compute_lambda(PairedSample(x, y), config)
            except NoDependence:
                counts["no-dependence"] += 1
                continue
            except ConstantSeries:
                violations += 1
                continue
            except Exception as exc:  # singular designs on heavily tied x
                counts[type(exc).__name__] += 1
                continue
        values = [rep.rho, rep.i_xy, rep.i_xyprime, rep.rho_x_yprime]
        if not all(math.isfinite(v) for v in values):
            violations += 1
        elif rep.degenerate:
            try:
                rep.require()
                violations += 1
            except NoDependence:
                counts["no-dependence"] += 1
        elif rep.lam is None or not 0.0 <= rep.lam <= 1.0 or math.isnan(rep.lam):
            violations += 1
        else:
            counts["lambda"] += 1
            counts["clamped"] += rep.clamped
    record(8, violations == 0, f"{violations} violations in 1000 samples; outcomes {dict(counts)}")


def _enum_entropy(symbols):
    n = len(symbols)
    return -sum((c / n) * math.log(c / n) for c in Counter(symbols).values())


def test_criterion_09_brute_force():
    r = np.random.default_rng(9)
    worst = 0.0
    hist_ok = True
    for _ in range(300):
        n = int(r.integers(3, 51))
        mx, my = int(r.integers(2, 5)), int(r.integers(2, 5))
        a = r.integers(0, mx, n)
        b = (a + r.integers(0, 2, n)) % my
        dx = DiscretizedSeries(a, mx, np.zeros((mx, 2)))
        dy = DiscretizedSeries(b, my, np.zeros((my, 2)))
        table = Counter(zip(a.tolist(), b.tolist()))
        counts = joint_histogram(dx, dy).counts
        hist_ok &= all(counts[i, j] == table.get((i, j), 0) for i in range(mx) for j in range(my))
        mi = _enum_entropy(a.tolist()) + _enum_entropy(b.tolist()) - _enum_entropy(list(zip(a, b)))
        worst = max(worst, abs(mutual_information(dx, dy, correction=False) - max(0.0, mi)))
        worst = max(worst, abs(entropy_of(dx, correction=False).value - _enum_entropy(a.tolist())))
    ci_ok = True
    for _ in range(60):
        n = int(r.integers(5, 201))
        m = int(r.integers(1, 4))
        s = np.round(r.normal(size=n), int(r.integers(1, 4)))
        eps = float(r.uniform(0.05, 1.5))
        w = [tuple(s[i : i + m]) for i in range(n - m + 1)]
        close = sum(max(abs(p - q) for p, q in zip(u, v)) < eps for u, v in itertools.combinations(w, 2))
        ci_ok &= correlation_integral(s, m, eps) == close / (len(w) * (len(w) - 1) // 2)
    ok = hist_ok and ci_ok and worst <= 1e-12
    record(9, ok, f"joint counts exact: {hist_ok}; max entropy/MI gap {worst:.1e}; "
                  f"correlation integral exact: {ci_ok}")


def test_criterion_10_binary_approximation():
    seq = gen_binary_markov(0.45, 4_000_000, seed=10)
    p1 = float(seq.mean())
    p0 = 1.0 - p1
    parts, ok = [], True
    for d in (2, 3):
        # analytic |Gamma(d) / (P0 P1)| = 0.1**d, inside the small-correlation regime
        gamma = binary_correlation_function(seq, d)
        approx = binary_mi_approx(gamma, p0, p1)
        exact = lagged_binary_mi(seq, d)
        rel = abs(approx - exact) / exact
        ok &= rel <= 0.2
        parts.append(f"d={d}: approx {approx:.3e} vs exact {exact:.3e} (rel {rel:.3f})")
    record(10, ok, "; ".join(parts) + " (tol 20%)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
