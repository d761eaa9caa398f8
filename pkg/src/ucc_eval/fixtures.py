"""Deterministic synthetic regression fixtures.

The gap fixture mimics a one-dimensional task whose noise blows up inside a
covariate gap: predictions are the noiseless function, informative bands are
the true local noise scale, and a band-shuffled variant (same band multiset,
randomly re-assigned) serves as a negative control.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import Batch

__all__ = ["GapFixture", "generate_gap_fixture"]

_GAP = (-1.0, 1.0)
_X_RANGE = (-3.0, 3.0)
_NOISE_OUTSIDE = 0.25
_NOISE_INSIDE = 1.5
_TAIL_DOF = 3.0  # gap noise is heavy-tailed relative to its scale


@dataclass(frozen=True)
class GapFixture:
    informative: Batch
    shuffled: Batch
    description: dict


def _truth(x: np.ndarray) -> np.ndarray:
    return x * np.sin(1.5 * x)


def generate_gap_fixture(n: int, seed: int) -> GapFixture:
    """Draw ``n`` samples with heteroscedastic noise concentrated in a gap.

    Same ``(n, seed)`` always yields the same batches.  Requires ``n >= 10``.
    """
    n = int(n)
    if n < 10:
        raise ValueError(f"need n >= 10, got {n}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(_X_RANGE[0], _X_RANGE[1], n)
    in_gap = (x >= _GAP[0]) & (x <= _GAP[1])
    sigma = np.where(in_gap, _NOISE_INSIDE, _NOISE_OUTSIDE)
    y_hat = _truth(x)
    # Outside: Gaussian.  Inside the gap: Student-t at the same per-region
    # scale, so the hard region produces occasional large excursions that a
    # constant band must pay disproportionately to capture.
    noise = np.where(in_gap, rng.standard_t(_TAIL_DOF, n), rng.standard_normal(n))
    y = y_hat + sigma * noise
    informative = Batch(y, y_hat, sigma, sigma)
    order = rng.permutation(n)
    shuffled = Batch(y, y_hat, sigma[order], sigma[order])
    description = {
        "n": n,
        "seed": int(seed),
        "gap": list(_GAP),
        "x_range": list(_X_RANGE),
        "noise_outside": _NOISE_OUTSIDE,
        "noise_inside": _NOISE_INSIDE,
        "gap_noise_dof": _TAIL_DOF,
        "bands": "true local noise scale; shuffled variant permutes the same bands",
    }
    return GapFixture(informative=informative, shuffled=shuffled, description=description)
