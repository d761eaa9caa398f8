"""Paired permutation test for the area difference between two models.

Both models must predict the same observations; they differ only in their
bands.  Under the null hypothesis the two band assignments are exchangeable
per sample, so each permutation swaps the band pair between the models
independently at every index with probability 1/2 and recomputes both areas.
The p-value uses add-one smoothing so it never reaches zero.

Each permutation draws its swap mask from a counter-based random stream
derived from ``(seed, permutation index)``, so results are bit-identical
regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .curve import BANDWIDTH_MISS_RATE, CoordinateSystem, auucc, build_curve, partial_auucc
from .errors import UnpairedBatches
from .metrics import Batch

__all__ = ["TestResult", "compare_auucc"]

_ALTERNATIVES = ("two-sided", "greater", "less")


@dataclass(frozen=True)
class TestResult:
    """Observed area difference and its permutation p-value."""

    observed_diff: float
    p_value: float
    n_permutations: int
    seed: int


def _check_paired(a: Batch, b: Batch) -> None:
    if len(a) != len(b):
        raise UnpairedBatches(f"lengths differ: {len(a)} vs {len(b)}")
    if not (
        np.allclose(a.y, b.y, rtol=0.0, atol=1e-12)
        and np.allclose(a.y_hat, b.y_hat, rtol=0.0, atol=1e-12)
    ):
        raise UnpairedBatches("batches disagree on (y, y_hat) pairs")


def _swap(a: Batch, b: Batch, mask: np.ndarray) -> tuple[Batch, Batch]:
    zl_a = np.where(mask, b.z_lower, a.z_lower)
    zu_a = np.where(mask, b.z_upper, a.z_upper)
    zl_b = np.where(mask, a.z_lower, b.z_lower)
    zu_b = np.where(mask, a.z_upper, b.z_upper)
    return Batch(a.y, a.y_hat, zl_a, zu_a), Batch(b.y, b.y_hat, zl_b, zu_b)


def _count(stat: float, observed: float, alternative: str) -> int:
    if alternative == "two-sided":
        return int(abs(stat) >= abs(observed))
    if alternative == "greater":
        return int(stat >= observed)
    return int(stat <= observed)


def compare_auucc(
    a: Batch,
    b: Batch,
    coords: CoordinateSystem = BANDWIDTH_MISS_RATE,
    n_perm: int = 999,
    seed: int = 0,
    window: tuple[float, float] | None = None,
    alternative: str = "two-sided",
    exact: bool = False,
) -> TestResult:
    """Test the significance of ``area(a) - area(b)`` on paired batches.

    Parameters
    ----------
    a, b : Batch
        Same length and identical ``(y, y_hat)`` pairs index by index
        (within 1e-12); they differ only in bands.
    n_perm : int
        Monte Carlo permutations (ignored with ``exact=True``).
    seed : int
        Stream key; identical inputs and seed give a bit-identical result.
    window : (lo, hi), optional
        Compare partial areas over this miss-rate window instead.
    alternative : str
        "two-sided" (default), "greater" or "less".
    exact : bool
        Enumerate all ``2^N`` swap assignments instead of sampling; only
        allowed for N <= 20.  ``n_permutations`` is then ``2^N - 1`` (the
        non-identity assignments), which keeps the add-one p-value formula.

    Raises :class:`UnpairedBatches` on mismatched inputs and propagates
    :class:`PartialSupport` from batches whose full area diverges.
    """
    if alternative not in _ALTERNATIVES:
        raise ValueError(f"alternative must be one of {_ALTERNATIVES}")
    _check_paired(a, b)
    n = len(a)

    if window is None:
        def area(batch: Batch) -> float:
            return auucc(build_curve(batch, coords))
    else:
        def area(batch: Batch) -> float:
            return partial_auucc(build_curve(batch, coords), window)

    observed = area(a) - area(b)

    if exact:
        if n > 20:
            raise ValueError("exact enumeration is limited to N <= 20")
        bits = 1 << np.arange(n)
        count = 0
        for code in range(1, 1 << n):
            mask = (code & bits) != 0
            pa, pb = _swap(a, b, mask)
            count += _count(area(pa) - area(pb), observed, alternative)
        total = (1 << n) - 1
        return TestResult(observed, (1 + count) / (total + 1), total, seed)

    if n_perm < 1:
        raise ValueError(f"n_perm must be >= 1, got {n_perm!r}")
    count = 0
    for index in range(1, n_perm + 1):
        rng = Generator(Philox(key=seed, counter=index << 128))
        mask = rng.random(n) < 0.5
        pa, pb = _swap(a, b, mask)
        count += _count(area(pa) - area(pb), observed, alternative)
    return TestResult(observed, (1 + count) / (n_perm + 1), n_perm, seed)
