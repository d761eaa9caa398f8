"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
complete.  Every tolerance is pinned here; nothing defers to calibration.
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from ucc_eval import (
    BANDWIDTH_MISS_RATE,
    Batch,
    EXCESS_MISS_RATE,
    apply_calibration,
    auucc,
    auucc_gain,
    bandwidth,
    build_curve,
    compare_auucc,
    conformal_scale,
    cost_at,
    critical_scales,
    deficit,
    excess,
    generate_gap_fixture,
    mean_absolute_error_check,
    min_cost,
    interval_score,
    miss_rate,
    scale_batch,
)

from conftest import (
    grid_miss_staircase,
    grid_trace,
    make_batch,
    make_symmetric_batch,
    python_curve,
)

GRID_STEPS = 100_001  # 1e5 intervals


@contextmanager
def criterion(name):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name} ({time.perf_counter() - start:.1f}s)")


def test_curve_matches_quadratic_reference_and_dense_grid():
    with criterion("curve-reference-and-grid-equivalence"):
        start = time.perf_counter()
        rng = np.random.default_rng(101)
        for trial in range(50):
            # The rectangular rule undercuts the staircase by exactly
            # x_max/N, so the 1% bound constrains the batch distribution:
            # keep N large and the critical-scale spread narrow.
            n = int(rng.integers(170, 201))
            batch = make_batch(rng, n, scale_lo=0.9, scale_hi=1.7)
            curve = build_curve(batch)

            # Literal quadratic re-evaluation: point-for-point agreement.
            ref_points, ref_floor = python_curve(batch)
            assert curve.miss_floor == ref_floor
            assert len(curve.points) == len(ref_points)
            for point, (k, miss, bw, ex, de) in zip(curve.points, ref_points):
                assert point.k == k
                assert point.miss_rate == miss
                assert point.bandwidth == pytest.approx(bw, rel=1e-9, abs=1e-12)
                assert point.excess == pytest.approx(ex, rel=1e-9, abs=1e-12)
                assert point.deficit == pytest.approx(de, rel=1e-9, abs=1e-12)

            # Dense-grid trace: every point lies on the brute-force curve.
            ks_curve = curve.scales()
            k_hi = float(ks_curve[-1]) * (1 + 1e-9)
            grid = np.linspace(0.0, k_hi, GRID_STEPS)
            miss_grid = grid_miss_staircase(batch, grid)
            idx = np.searchsorted(ks_curve, grid, side="right") - 1
            expected = np.array([curve.points[i].miss_rate for i in idx])
            np.testing.assert_array_equal(miss_grid, expected)

            # Direct dense trace cross-checks the bisection staircase and
            # the bandwidth linearity on a subgrid (and fully on 3 batches).
            sub = grid[:: 512] if trial >= 3 else grid
            miss_sub, bw_sub = grid_trace(batch, sub)
            np.testing.assert_array_equal(miss_sub, miss_grid[:: 512] if trial >= 3 else miss_grid)
            bw1 = bandwidth(batch)
            np.testing.assert_allclose(bw_sub, sub * bw1, rtol=1e-9, atol=1e-12)

            # Rectangular area within 1% of the grid integral.
            integral = float(np.sum(miss_grid[1:] * np.diff(grid) * bw1))
            area = auucc(curve, "rectangular")
            assert abs(area - integral) <= 0.01 * integral
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"runtime budget exceeded: {elapsed:.1f}s"


def test_area_equals_sorted_mean_of_per_sample_x():
    with criterion("area-sorted-mean-identity"):
        start = time.perf_counter()
        rng = np.random.default_rng(202)
        for _ in range(100):
            n = int(rng.integers(80, 151))
            batch = make_batch(rng, n)
            crit = critical_scales(batch).scales
            while np.unique(crit).size != n:  # identity needs distinct scales
                batch = make_batch(rng, n)
                crit = critical_scales(batch).scales
            for coords, metric in (
                (BANDWIDTH_MISS_RATE, bandwidth),
                (EXCESS_MISS_RATE, excess),
            ):
                curve = build_curve(batch, coords)
                xs = sorted(metric(scale_batch(batch, float(k))) for k in crit)
                identity = math.fsum(xs[:-1]) / n
                assert abs(auucc(curve) - identity) <= 1e-9
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"runtime budget exceeded: {elapsed:.1f}s"


def test_scale_invariance_and_constant_band_gain():
    with criterion("scale-invariance-and-zero-gain-reference"):
        rng = np.random.default_rng(303)
        for _ in range(20):
            batch = make_batch(rng, int(rng.integers(40, 120)))
            base = build_curve(batch)
            base_area = auucc(base)
            for c in (1e-3, 1.0, 1e3):
                rescaled = build_curve(scale_batch(batch, c))
                assert len(rescaled.points) == len(base.points)
                np.testing.assert_allclose(rescaled.xs(), base.xs(), rtol=1e-12)
                np.testing.assert_allclose(rescaled.ys(), base.ys(), rtol=1e-12)
                assert auucc(rescaled) == pytest.approx(base_area, rel=1e-12)

        # A constant-band batch against its own reference: power-of-two
        # constants relate to the reference by exact float scaling, so the
        # gain is exactly zero; a general constant is float-limited.
        carrier = make_batch(rng, 60)
        for const in (0.125, 0.5, 1.0, 2.0, 8.0):
            model = Batch(carrier.y, carrier.y_hat,
                          np.full(60, const), np.full(60, const))
            assert auucc_gain(model).gain_percent == 0.0
        odd = Batch(carrier.y, carrier.y_hat, np.full(60, 7.3), np.full(60, 7.3))
        assert abs(auucc_gain(odd).gain_percent) <= 1e-12


def test_symmetric_band_mean_absolute_error_identity():
    with criterion("symmetric-band-mae-identity"):
        rng = np.random.default_rng(404)
        for _ in range(30):
            batch = make_symmetric_batch(rng, int(rng.integers(30, 120)))
            abs_err = np.abs(batch.y - batch.y_hat)
            for k in rng.uniform(0.0, 3.0, 10):
                scaled = scale_batch(batch, float(k))
                lhs = excess(scaled) + deficit(scaled)
                rhs = float(np.mean(np.abs(abs_err - k * batch.z_upper)))
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)
                cost_based, direct = mean_absolute_error_check(batch, float(k))
                assert abs(2 * cost_based - direct) <= 1e-12 * max(1.0, direct)


def test_interval_score_decomposition_and_proportionality():
    with criterion("interval-score-decomposition"):
        rng = np.random.default_rng(505)
        for alpha in (0.05, 0.2, 0.5):
            batch = make_batch(rng, 80)
            for k in np.linspace(0.1, 2.5, 10):
                scaled = scale_batch(batch, float(k))
                score = interval_score(scaled, alpha)
                decomposed = 2 * bandwidth(scaled) + (2 / alpha) * deficit(scaled)
                assert abs(score - decomposed) <= 1e-12 * max(1.0, abs(score))
                # Proportionality to the linear cost with weights (alpha, 1):
                # the empirically pinned constant is 2/alpha.
                denom = alpha * bandwidth(scaled) + deficit(scaled)
                assert score / denom == pytest.approx(2 / alpha, rel=1e-12)


def _drop_tolerant(n, alpha):
    rank = math.ceil(Fraction(n + 1) * (1 - Fraction(alpha)))
    return rank <= n and Fraction(rank) >= (1 - Fraction(alpha)) * n + 1


def _synthetic_pairs(rng, n):
    y_hat = rng.normal(0.0, 1.0, n)
    band = rng.lognormal(-0.3, 0.5, n)
    z = rng.normal(0.0, 0.8, n) * band ** 0.9
    return Batch(y_hat + z, y_hat, band, band)


def test_conformal_guarantee():
    with criterion("conformal-coverage-guarantee"):
        rng = np.random.default_rng(606)

        # Calibration-set coverage >= 1 - alpha, exactly, 100 random pairs.
        done = 0
        while done < 100:
            n = int(rng.integers(15, 300))
            alpha = float(rng.uniform(0.02, 0.5))
            if math.ceil(Fraction(n + 1) * (1 - Fraction(alpha))) > n:
                continue
            done += 1
            cal = _synthetic_pairs(rng, n)
            result = conformal_scale(cal, alpha)
            assert result.achieved_coverage >= 1 - alpha
            if _drop_tolerant(n, alpha):
                applied = apply_calibration(cal, result)
                assert miss_rate(applied) <= alpha

        # Split coverage over 500 seeded repetitions: the mean lands inside
        # the finite-sample band around the nominal level.
        alpha, n_cal = 0.1, 100
        coverages = []
        for rep in range(500):
            rep_rng = np.random.default_rng(60_600 + rep)
            pool = _synthetic_pairs(rep_rng, 2 * n_cal)
            cal = Batch(pool.y[:n_cal], pool.y_hat[:n_cal],
                        pool.z_lower[:n_cal], pool.z_upper[:n_cal])
            test = Batch(pool.y[n_cal:], pool.y_hat[n_cal:],
                         pool.z_lower[n_cal:], pool.z_upper[n_cal:])
            fit = conformal_scale(cal, alpha)
            coverages.append(1.0 - miss_rate(apply_calibration(test, fit)))
        mean = float(np.mean(coverages))
        sem = float(np.std(coverages, ddof=1) / math.sqrt(len(coverages)))
        low = 1 - alpha - 3 * sem
        high = 1 - alpha + 1 / (n_cal + 1) + 3 * sem
        assert low <= mean <= high, f"mean coverage {mean:.4f} outside [{low:.4f}, {high:.4f}]"


def test_permutation_test_behavior():
    with criterion("permutation-test-behavior"):
        start = time.perf_counter()
        rng = np.random.default_rng(707)

        # Identical batches: every permuted statistic ties the observed 0.
        batch = make_batch(rng, 40)
        same = compare_auucc(batch, batch, n_perm=99, seed=1)
        assert same.observed_diff == 0.0
        assert same.p_value == 1.0

        # Bands proportional to the absolute error capture everything at a
        # single scale (zero area); against shuffled bands the difference
        # must be significant.
        n = 200
        y_hat = rng.normal(0.0, 1.0, n)
        y = y_hat + rng.normal(0.0, 1.0, n)
        err = np.abs(y - y_hat)  # the error as the batch observes it
        oracle = Batch(y, y_hat, err, err)
        order = rng.permutation(n)
        shuffled = Batch(y, y_hat, err[order], err[order])
        assert auucc(build_curve(oracle)) == 0.0
        result = compare_auucc(oracle, shuffled, n_perm=500, seed=7)
        assert result.p_value < 0.05

        # Null calibration: exchangeable bands, 200 repetitions.
        hits = 0
        for rep in range(200):
            rep_rng = np.random.default_rng(70_700 + rep)
            y_hat = rep_rng.normal(0.0, 1.0, 50)
            z = rep_rng.normal(0.0, 1.0, 50)
            a = Batch(y_hat + z, y_hat, rep_rng.uniform(0.5, 1.5, 50),
                      rep_rng.uniform(0.5, 1.5, 50))
            b = Batch(y_hat + z, y_hat, rep_rng.uniform(0.5, 1.5, 50),
                      rep_rng.uniform(0.5, 1.5, 50))
            p = compare_auucc(a, b, n_perm=99, seed=rep).p_value
            hits += p <= 0.1
        fraction = hits / 200
        assert 0.04 <= fraction <= 0.18, f"null rejection fraction {fraction}"
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"runtime budget exceeded: {elapsed:.1f}s"


def test_gap_fixture_crossover():
    with criterion("gap-fixture-crossover"):
        fixture = generate_gap_fixture(500, 7)
        full = auucc_gain(fixture.informative).gain_percent
        partial = auucc_gain(fixture.informative, window=(0.0, 0.5)).gain_percent
        control = auucc_gain(fixture.shuffled).gain_percent
        assert full > 0.0, f"full-range gain {full:.2f}% not positive"
        assert partial > full, f"partial {partial:.2f}% <= full {full:.2f}%"
        assert control <= 1.0, f"shuffled control gain {control:.2f}% > 1pp"


def test_cost_minimum_matches_dense_grid():
    with criterion("cost-minimum-grid-agreement"):
        rng = np.random.default_rng(909)
        for _ in range(20):
            n = int(rng.integers(50, 150))
            batch = make_batch(rng, n)
            c = float(rng.uniform(0.05, 0.95))
            result = min_cost(batch, c)
            k_max = float(np.max(critical_scales(batch).finite))
            grid = np.linspace(0.0, k_max * (1 + 1e-9), GRID_STEPS)
            miss_grid = grid_miss_staircase(batch, grid)
            bw1 = bandwidth(batch)
            costs = c * grid * bw1 + (1 - c) * miss_grid
            grid_min = float(costs.min())
            # The candidate minimum can only undercut the grid by what the
            # cost can change across one grid step.
            resolution = c * bw1 * (grid[1] - grid[0])
            assert result.min_cost <= grid_min + 1e-12
            assert grid_min - result.min_cost <= resolution + 1e-12
            # Spot-check the reported minimum against a direct evaluation.
            assert result.min_cost == pytest.approx(
                cost_at(batch, result.k_star, c), rel=1e-12, abs=1e-15
            )
