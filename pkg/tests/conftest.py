"""Shared builders and independent reference implementations.

The reference ("oracle") implementations here deliberately avoid the
library's vectorized kernels: pure-Python loops, ``math.fsum``
accumulation, and per-scale re-evaluation.  Tests compare the fast paths
against them.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ucc_eval import Batch


def make_batch(rng: np.random.Generator, n: int, *,
               scale_lo: float = 0.8, scale_hi: float = 1.8,
               zero_error_frac: float = 0.0) -> Batch:
    """Random batch whose critical scales land in [scale_lo, scale_hi].

    Bounding the spread of critical scales keeps the rectangular-rule /
    staircase discrepancy (exactly x_max/N) well inside the tolerances the
    suite asserts.
    """
    y_hat = rng.normal(0.0, 2.0, n)
    z_lower = rng.uniform(0.5, 1.5, n)
    z_upper = rng.uniform(0.5, 1.5, n)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    target_scale = rng.uniform(scale_lo, scale_hi, n)
    active = np.where(sign > 0, z_upper, z_lower)
    z = sign * target_scale * active
    if zero_error_frac > 0:
        zero = rng.random(n) < zero_error_frac
        z = np.where(zero, 0.0, z)
    return Batch(y_hat + z, y_hat, z_lower, z_upper)


def make_symmetric_batch(rng: np.random.Generator, n: int) -> Batch:
    y_hat = rng.normal(0.0, 1.0, n)
    band = rng.uniform(0.2, 2.0, n)
    z = rng.normal(0.0, 1.0, n) * band
    return Batch(y_hat + z, y_hat, band, band)


def python_critical_scales(batch: Batch) -> list[float]:
    out = []
    for yi, yhi, li, ui in zip(batch.y, batch.y_hat, batch.z_lower, batch.z_upper):
        z = float(yi) - float(yhi)
        if z == 0.0:
            out.append(0.0)
        elif z > 0.0:
            out.append(math.inf if ui == 0.0 else z / float(ui))
        else:
            out.append(math.inf if li == 0.0 else -z / float(li))
    return out


def python_point_at(batch: Batch, k: float, crit: list[float] | None = None):
    """Literal re-evaluation of one operating point with fsum accumulation.

    Capture is decided by comparing critical scales (an observation whose
    interval is scaled to touch it exactly counts as captured, ties
    included), matching the library's stated convention.
    """
    if crit is None:
        crit = python_critical_scales(batch)
    n = len(batch)
    z = [float(a) - float(b) for a, b in zip(batch.y, batch.y_hat)]
    zl = [float(v) for v in batch.z_lower]
    zu = [float(v) for v in batch.z_upper]
    captured = [ki <= k for ki in crit]
    miss = (n - sum(captured)) / n
    bw = math.fsum(k * li + k * ui for li, ui in zip(zl, zu)) / (2 * n)
    ex = math.fsum(
        max(0.0, min(zi + k * li, k * ui - zi))
        for zi, li, ui, cap in zip(z, zl, zu, captured) if cap
    ) / n
    de = math.fsum(
        min(abs(zi + k * li), abs(zi - k * ui))
        for zi, li, ui, cap in zip(z, zl, zu, captured) if not cap
    ) / n
    return miss, bw, ex, de


def python_curve(batch: Batch):
    """O(N^2) curve construction: one full re-evaluation per distinct scale.

    Returns (points, miss_floor) with points as (k, miss, bw, ex, de).
    """
    crit = python_critical_scales(batch)
    finite = sorted({ki for ki in crit if math.isfinite(ki)})
    assert finite, "reference construction needs a finite critical scale"
    ks = finite if finite[0] == 0.0 else [0.0] + finite
    points = [(k, *python_point_at(batch, k, crit)) for k in ks]
    unbounded = sum(1 for ki in crit if math.isinf(ki))
    return points, unbounded / len(batch)


def grid_trace(batch: Batch, ks: np.ndarray):
    """Direct scale-and-measure trace over a scale grid (no curve kernel).

    Capture uses the plain closed-interval test on materialized bands.
    Returns (miss, bandwidth) arrays.
    """
    z = batch.y - batch.y_hat
    neg_z = -z
    width = batch.z_lower + batch.z_upper
    n = len(batch)
    miss = np.empty(len(ks))
    bw = np.empty(len(ks))
    chunk = max(1, 4_000_000 // max(n, 1))
    for start in range(0, len(ks), chunk):
        kk = ks[start:start + chunk, np.newaxis]
        scaled = kk * batch.z_upper
        captured = z <= scaled
        np.multiply(kk, batch.z_lower, out=scaled)
        captured &= neg_z <= scaled
        stop = start + kk.shape[0]
        miss[start:stop] = (n - captured.sum(axis=1)) / n
        np.multiply(kk, width, out=scaled)
        bw[start:stop] = scaled.sum(axis=1) / (2 * n)
    return miss, bw


def grid_miss_staircase(batch: Batch, ks: np.ndarray) -> np.ndarray:
    """Per-grid-point miss rate from direct membership tests.

    Evaluates the same closed-interval predicate as :func:`grid_trace` but
    locates each sample's first capturing grid point by bisection, which is
    valid because ``fl(k * z)`` is monotone in ``k`` (correctly rounded
    multiplication), so per-sample membership is a step function of the
    grid index even at float level.  The last grid point must capture every
    sample.
    """
    z = batch.y - batch.y_hat
    neg_z = -z
    n = len(batch)
    last = ks[-1]
    assert np.all((z <= last * batch.z_upper) & (neg_z <= last * batch.z_lower)), \
        "grid must extend past the largest critical scale"
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, len(ks) - 1, dtype=np.int64)
    while np.any(lo < hi):
        mid = (lo + hi) // 2
        k_mid = ks[mid]
        captured = (z <= k_mid * batch.z_upper) & (neg_z <= k_mid * batch.z_lower)
        hi = np.where(captured, mid, hi)
        lo = np.where(captured, lo, mid + 1)
    counts = np.bincount(lo, minlength=len(ks))
    return (n - np.cumsum(counts)) / n


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
