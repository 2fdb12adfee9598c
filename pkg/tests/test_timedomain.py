"""Time-domain feature calculators against independent brute-force oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from parguard.features import (
    DegenerateSignalWarning,
    agg_linear_trend,
    ar_coefficients,
    autocorrelation,
    avg_change_quantile,
    count_peaks,
    energy_ratio_by_chunks,
    maximum,
)


# ---------------------------------------------------------------------------
# brute-force oracles (plain loops, no shared code with the implementation)
# ---------------------------------------------------------------------------

def oracle_autocorrelation(x, lag):
    n = len(x)
    mu = sum(x) / n
    var = sum((v - mu) ** 2 for v in x) / n
    if var == 0:
        return 0.0
    acc = 0.0
    for t in range(n - lag):
        acc += (x[t] - mu) * (x[t + lag] - mu)
    return acc / ((n - lag) * var)


def oracle_change_quantile(x, ql, qh):
    lo, hi = np.quantile(x, ql), np.quantile(x, qh)
    diffs = []
    for t in range(len(x) - 1):
        if lo <= x[t] <= hi and lo <= x[t + 1] <= hi:
            diffs.append(abs(x[t + 1] - x[t]))
    return sum(diffs) / len(diffs) if diffs else 0.0


def oracle_count_peaks(x, m):
    count = 0
    for t in range(m, len(x) - m):
        if all(x[t] > x[t - j] and x[t] > x[t + j] for j in range(1, m + 1)):
            count += 1
    return count


def oracle_energy_ratio(x, chunks, j):
    n = len(x)
    total = sum(v * v for v in x)
    if total == 0:
        return 0.0
    base, extra = divmod(n, chunks)
    bounds, start = [], 0
    for c in range(chunks):
        size = base + (1 if c < extra else 0)
        bounds.append((start, start + size))
        start += size
    lo, hi = bounds[j - 1]
    return sum(v * v for v in x[lo:hi]) / total


def oracle_trend(x, window, aggregate):
    stats_per_window = []
    for start in range(0, len(x) - window + 1, window):
        seg = x[start: start + window]
        fit = stats.linregress(np.arange(window), seg)
        val = {"slope": fit.slope, "intercept": fit.intercept,
               "stderr": 0.0 if np.isnan(fit.stderr) else fit.stderr}[aggregate]
        stats_per_window.append(val)
    return float(np.mean(stats_per_window))


# ---------------------------------------------------------------------------
# bulk agreement with the oracles
# ---------------------------------------------------------------------------

def test_oracle_agreement_on_random_signals(rng):
    for _ in range(100):
        x = rng.normal(size=167) * rng.uniform(0.1, 100)
        assert abs(autocorrelation(x, 5) - oracle_autocorrelation(list(x), 5)) < 1e-10
        assert abs(avg_change_quantile(x, 0.2, 0.8) - oracle_change_quantile(x, 0.2, 0.8)) < 1e-10
        assert count_peaks(x, 3) == oracle_count_peaks(list(x), 3)
        assert abs(energy_ratio_by_chunks(x, 10, 4) - oracle_energy_ratio(list(x), 10, 4)) < 1e-10


def test_trend_matches_per_window_fits(rng):
    x = np.arange(167.0) ** 2
    assert abs(agg_linear_trend(x, 10, "slope") - oracle_trend(x, 10, "slope")) < 1e-8
    for _ in range(20):
        y = rng.normal(size=167)
        for agg in ("slope", "intercept", "stderr"):
            assert abs(agg_linear_trend(y, 20, agg) - oracle_trend(y, 20, agg)) < 1e-8


# ---------------------------------------------------------------------------
# autoregressive coefficients
# ---------------------------------------------------------------------------

def test_ar_exact_recurrence():
    x = 0.7 ** np.arange(167)
    phi = ar_coefficients(x, 1)
    assert abs(phi[1] - 0.7) < 1e-9
    assert abs(phi[0]) < 1e-9


def test_ar2_monte_carlo_recovery(rng):
    # order-1 initial conditions give the regression its information; the
    # sigma=0.01 innovations only perturb the target side
    hits = 0
    for _ in range(100):
        x = np.zeros(167)
        x[0], x[1] = 1.0, 0.8
        eps = rng.normal(0, 0.01, 167)
        for t in range(2, 167):
            x[t] = 0.5 * x[t - 1] - 0.3 * x[t - 2] + eps[t]
        phi = ar_coefficients(x, 2)
        if abs(phi[1] - 0.5) <= 0.05 and abs(phi[2] - (-0.3)) <= 0.05:
            hits += 1
    assert hits >= 95


def test_ar_constant_signal_flagged_ridge():
    with pytest.warns(DegenerateSignalWarning):
        phi = ar_coefficients(np.ones(100), 3)
    assert np.all(np.abs(phi[1:]) < 1e-6)


def test_ar_rejects_short_signal():
    with pytest.raises(ValueError):
        ar_coefficients(np.ones(16), 4)


# ---------------------------------------------------------------------------
# individual trivial / derived cases
# ---------------------------------------------------------------------------

def test_change_quantile_cases():
    assert avg_change_quantile(np.full(50, 3.0), 0.0, 1.0) == 0.0
    x = np.tile([0.0, 1.0], 40)
    assert abs(avg_change_quantile(x, 0.0, 1.0) - 1.0) < 1e-12
    # corridor excluding everything but one value -> no pairs
    y = np.arange(100.0)
    assert avg_change_quantile(y, 0.0, 0.005) == 0.0
    with pytest.raises(ValueError):
        avg_change_quantile(x, 0.5, 0.5)


def test_trend_cases():
    t = np.arange(100.0)
    assert abs(agg_linear_trend(2 * t, 10, "slope") - 2.0) < 1e-12
    assert agg_linear_trend(np.full(100, 7.0), 10, "slope") == 0.0
    assert agg_linear_trend(np.full(100, 7.0), 10, "stderr") == 0.0
    with pytest.raises(ValueError):
        agg_linear_trend(t, 200)
    with pytest.raises(ValueError):
        agg_linear_trend(t, 10, "median")


def test_autocorrelation_cases(rng):
    x = rng.normal(size=167)
    assert abs(autocorrelation(x, 0) - 1.0) < 1e-12
    # sine at half-period lag -> about -1
    n, period = 160, 32
    s = np.sin(2 * np.pi * np.arange(n) / period)
    assert abs(autocorrelation(s, period // 2) + 1.0) < 0.02
    with pytest.warns(DegenerateSignalWarning):
        assert autocorrelation(np.ones(50), 3) == 0.0
    with pytest.raises(ValueError):
        autocorrelation(x, 167)


def test_white_noise_autocorrelation_bound(rng):
    # |r(5)| < 3/sqrt(n) for most draws; check the Monte-Carlo rate
    bad = sum(
        abs(autocorrelation(rng.normal(size=167), 5)) >= 3 / np.sqrt(167)
        for _ in range(200)
    )
    assert bad <= 4  # far tail of the ~0.01% expectation at 3 sigma


def test_count_peaks_cases():
    assert count_peaks(np.arange(50.0), 1) == 0
    bump = np.array([0.0, 1.0, 2.0, 1.0, 0.0])
    assert count_peaks(bump, 1) == 1
    s = np.sin(2 * np.pi * np.arange(96) / 32)  # 3 full periods
    assert count_peaks(s, 2) == 3
    with pytest.raises(ValueError):
        count_peaks(bump, 0)


def test_energy_ratio_cases():
    x = np.zeros(100)
    x[37] = 5.0  # chunk 4 of 10
    assert energy_ratio_by_chunks(x, 10, 4) == 1.0
    assert energy_ratio_by_chunks(x, 10, 5) == 0.0
    y = np.ones(103)
    ratios = [energy_ratio_by_chunks(y, 10, j) for j in range(1, 11)]
    assert abs(sum(ratios) - 1.0) < 1e-12
    assert all(abs(r - 1 / 10) < 0.01 for r in ratios)
    with pytest.warns(DegenerateSignalWarning):
        assert energy_ratio_by_chunks(np.zeros(40), 10, 1) == 0.0
    with pytest.raises(ValueError):
        energy_ratio_by_chunks(y, 10, 11)


def test_ratio_partition_sums_to_one(rng):
    x = rng.normal(size=167)
    assert abs(sum(energy_ratio_by_chunks(x, 10, j) for j in range(1, 11)) - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# translation-consistency properties
# ---------------------------------------------------------------------------

finite_signals = st.lists(
    st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=20, max_size=60
).map(np.array)


@given(x=finite_signals, c=st.floats(min_value=-100, max_value=100))
@settings(max_examples=50, deadline=None)
def test_offset_invariance(x, c):
    if np.var(x) > 1e-9:
        assert abs(autocorrelation(x + c, 2) - autocorrelation(x, 2)) < 1e-6
    assert abs(avg_change_quantile(x + c, 0.0, 1.0) - avg_change_quantile(x, 0.0, 1.0)) < 1e-8
    assert abs(maximum(x + c) - (maximum(x) + c)) < 1e-9
