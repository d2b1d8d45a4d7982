"""Classical studentized CUSUM tests for changes in mean and variance.

These serve as comparison columns next to the moment-based tests; they share
the Kolmogorov p-value machinery.
"""
from __future__ import annotations

import math

import numpy as np

from .distributions import DataError, as_sample, kolmogorov_cdf
from .cusum import TestConfig, TestResult, Family


def _cusum_on(values: np.ndarray, r: int):
    n = values.size
    ks = np.arange(r, n - r + 1)
    csum = np.cumsum(values)
    total = csum[-1]
    left_mean = csum[ks - 1] / ks
    right_mean = (total - csum[ks - 1]) / (n - ks)
    vals = ks * (n - ks) / n**1.5 * np.abs(left_mean - right_mean)
    idx = int(np.argmax(vals))
    return float(vals[idx]), int(ks[idx])


def _studentized(values: np.ndarray, r: int, config: TestConfig) -> TestResult:
    n = values.size
    if n < 2 * r:
        raise DataError(f"need n >= 2r = {2 * r} observations")
    var = float(np.var(values))  # 1/n normalization, matching the plug-in covariances
    if not var > 0.0:
        raise DataError("degenerate sample: zero variance")
    stat, argmax_k = _cusum_on(values, r)
    sd = math.sqrt(var)
    p = 1.0 - kolmogorov_cdf(stat / sd)
    return TestResult(
        statistic=stat,
        sigma_hat=sd,
        p_value=p,
        argmax_k=argmax_k,
        left_params=None,
        right_params=None,
        skipped_k=(),
        config=config,
        n=n,
    )


def mean_cusum(sample, r: int = 10) -> TestResult:
    """CUSUM test for a change in expectation, studentized by the sample s.d."""
    values = as_sample(sample)
    cfg = TestConfig(family=Family.PWM_T, target="mu", r=r, recenter=False, variance_correction=1.0)
    return _studentized(values, r, cfg)


def variance_cusum(sample, r: int = 10) -> TestResult:
    """CUSUM test for a change in variance: the mean test applied to squared
    deviations from the full-sample mean."""
    values = as_sample(sample)
    cfg = TestConfig(family=Family.PWM_T, target="sigma", r=r, recenter=False, variance_correction=1.0)
    sq = (values - values.mean()) ** 2
    return _studentized(sq, r, cfg)
