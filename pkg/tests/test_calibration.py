"""Conformal scale fitting and application."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ucc_eval import (
    Batch,
    InsufficientCalibrationData,
    UnboundedScores,
    apply_calibration,
    conformal_scale,
    critical_scales,
    miss_rate,
    scale_batch,
)


def score_ladder(n):
    """Batch whose critical scales are exactly 1..n."""
    return Batch.from_bands(list(range(1, n + 1)), [0.0] * n, [1.0] * n, [1.0] * n)


def drop_tolerant(n, alpha):
    """Rank slack >= alpha: one boundary sample cannot break coverage."""
    rank = math.ceil(Fraction(n + 1) * (1 - Fraction(alpha)))
    return rank <= n and Fraction(rank) >= (1 - Fraction(alpha)) * n + 1


class TestConformalScale:
    def test_rank_at_alpha_point_one(self):
        result = conformal_scale(score_ladder(9), 0.1)
        assert result.q_hat == 9.0
        assert result.n == 9

    def test_rank_at_alpha_half(self):
        assert conformal_scale(score_ladder(9), 0.5).q_hat == 5.0

    def test_insufficient_data(self):
        with pytest.raises(InsufficientCalibrationData):
            conformal_scale(score_ladder(3), 0.01)

    def test_unbounded_scores(self):
        bad = Batch.from_bands([1.0, 2.0], [0.0, 0.0], [1.0, 1.0], [1.0, 0.0])
        with pytest.raises(UnboundedScores):
            conformal_scale(bad, 0.2)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValueError):
            conformal_scale(score_ladder(9), alpha)

    def test_monotone_in_alpha(self, rng):
        batch = Batch.from_bands(
            rng.normal(0, 2, 50), np.zeros(50), rng.uniform(0.5, 2, 50), rng.uniform(0.5, 2, 50)
        )
        alphas = np.sort(rng.uniform(0.02, 0.6, 10))
        qs = [conformal_scale(batch, a).q_hat for a in alphas]
        assert all(q1 >= q2 for q1, q2 in zip(qs, qs[1:]))

    def test_achieved_coverage_at_least_target(self, rng):
        for _ in range(25):
            n = int(rng.integers(15, 200))
            alpha = float(rng.uniform(0.02, 0.5))
            batch = Batch.from_bands(
                rng.normal(0, 2, n), np.zeros(n),
                rng.uniform(0.5, 2, n), rng.uniform(0.5, 2, n),
            )
            try:
                result = conformal_scale(batch, alpha)
            except InsufficientCalibrationData:
                continue
            assert result.achieved_coverage >= 1 - alpha


class TestApplyCalibration:
    def test_scales_bands(self):
        batch = Batch.from_bands([0.0], [0.0], [1.0], [1.0])
        result = conformal_scale(score_ladder(9), 0.5)  # q_hat = 5
        applied = apply_calibration(batch, result)
        assert applied.z_lower[0] == 5.0
        assert applied.z_upper[0] == 5.0

    def test_zero_q_hat_gives_zero_width(self):
        from ucc_eval import CalibrationResult
        batch = Batch.from_bands([0.0, 1.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0])
        zero = CalibrationResult(q_hat=0.0, alpha=0.5, n=9, achieved_coverage=1.0)
        applied = apply_calibration(batch, zero)
        assert np.all(applied.z_upper == 0.0)

    def test_apply_back_meets_miss_level(self, rng):
        # (n, alpha) pairs whose quantile rank has slack >= alpha, so the
        # one-ulp band materialization at the quantile sample cannot tip
        # the count below the guarantee.
        checked = 0
        while checked < 20:
            n = int(rng.integers(20, 250))
            alpha = float(rng.uniform(0.05, 0.4))
            if not drop_tolerant(n, alpha):
                continue
            checked += 1
            batch = Batch.from_bands(
                rng.normal(0, 2, n), rng.normal(0, 1, n),
                rng.uniform(0.3, 2, n), rng.uniform(0.3, 2, n),
            )
            result = conformal_scale(batch, alpha)
            assert miss_rate(apply_calibration(batch, result)) <= alpha

    def test_scaling_by_quantile_captures_rank_count(self, rng):
        # Score-side statement of the same guarantee, exact by order
        # statistics regardless of float materialization.
        for _ in range(20):
            n = int(rng.integers(20, 250))
            alpha = float(rng.uniform(0.05, 0.4))
            batch = Batch.from_bands(
                rng.normal(0, 2, n), rng.normal(0, 1, n),
                rng.uniform(0.3, 2, n), rng.uniform(0.3, 2, n),
            )
            result = conformal_scale(batch, alpha)
            scores = critical_scales(batch).scales
            rank = math.ceil(Fraction(n + 1) * (1 - Fraction(alpha)))
            assert np.count_nonzero(scores <= result.q_hat) >= rank
