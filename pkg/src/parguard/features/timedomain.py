"""Time-domain feature calculators for one-cycle differential current
windows.

The seven families used downstream (per phase):

    F1  autoregressive coefficients (least squares)
    F2  maximum
    F3  average change quantile
    F4  aggregated linear trend
    F5  autocorrelation
    F6  number of peaks
    F7  energy ratio by chunks

Degenerate inputs (constant signals, zero variance, zero energy) take a
documented fallback and emit DegenerateSignalWarning instead of raising.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class DegenerateSignalWarning(UserWarning):
    """A feature hit a degenerate-input fallback path."""


@dataclass(frozen=True)
class TimeFeatureParams:
    """Default parameterization of the time-domain features.

    The defaults are artifact configuration, not quoted values: lag-1 AR
    scalar, the full (0, 1) change-quantile corridor, 20-sample trend
    windows, autocorrelation lags {1, 2, 5}, peak support 3, ten energy
    chunks with the first chunk as the scalar.
    """

    ar_order: int = 4
    quantile_pairs: tuple = ((0.0, 0.2), (0.2, 0.4), (0.4, 0.6), (0.6, 0.8), (0.8, 1.0))
    default_corridor: tuple = (0.0, 1.0)
    trend_window: int = 20
    trend_aggregate: str = "slope"
    ac_lags: tuple = (1, 2, 5)
    peak_support: int = 3
    chunk_count: int = 10
    energy_chunk: int = 1


def ar_coefficients(x: np.ndarray, order: int) -> np.ndarray:
    """Least-squares AR(order) fit with intercept.

    Minimizes sum_{t=order..n-1} [x_t - phi_0 - sum_i phi_i x_{t-i}]^2 via
    the normal equations and returns [phi_0, phi_1, ..., phi_order].  A
    singular or near-singular design falls back to ridge regression with
    lambda = 1e-8 on the lag coefficients (intercept unpenalized) and
    emits DegenerateSignalWarning.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if order < 1:
        raise ValueError("order must be >= 1")
    if n <= 4 * order:
        raise ValueError(f"need more than {4 * order} samples for order {order}")
    rows = n - order
    A = np.ones((rows, order + 1))
    for i in range(1, order + 1):
        A[:, i] = x[order - i: n - i]
    b = x[order:]
    G = A.T @ A
    rhs = A.T @ b
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        warnings.warn(
            "singular AR design matrix; using ridge fallback (lambda=1e-8)",
            DegenerateSignalWarning,
        )
        penalty = np.eye(order + 1) * 1e-8
        penalty[0, 0] = 0.0
        return np.linalg.solve(G + penalty, rhs)
    return np.linalg.solve(G, rhs)


def maximum(x: np.ndarray) -> float:
    return float(np.max(x))


def avg_change_quantile(x: np.ndarray, ql: float, qh: float) -> float:
    """Mean |x_{t+1} - x_t| over pairs lying inside the [ql, qh] quantile
    corridor; 0 when fewer than two samples fall in the corridor."""
    if not (0.0 <= ql < qh <= 1.0):
        raise ValueError("need 0 <= ql < qh <= 1")
    x = np.asarray(x, dtype=float)
    lo, hi = np.quantile(x, ql), np.quantile(x, qh)
    inside = (x >= lo) & (x <= hi)
    pair = inside[:-1] & inside[1:]
    if pair.sum() == 0:
        return 0.0
    return float(np.mean(np.abs(np.diff(x))[pair]))


def _ols_line(t: np.ndarray, y: np.ndarray):
    """Slope, intercept and slope standard error of an OLS line fit."""
    n = len(t)
    tm, ym = t.mean(), y.mean()
    stt = np.sum((t - tm) ** 2)
    if stt == 0.0:
        return 0.0, ym, 0.0
    slope = np.sum((t - tm) * (y - ym)) / stt
    intercept = ym - slope * tm
    resid = y - (intercept + slope * t)
    if n > 2:
        stderr = np.sqrt(np.sum(resid ** 2) / (n - 2) / stt)
    else:
        stderr = 0.0
    return float(slope), float(intercept), float(stderr)


def agg_linear_trend(x: np.ndarray, window: int, aggregate: str = "slope") -> float:
    """OLS line fit per non-overlapping window, then the mean of the chosen
    statistic (slope | intercept | stderr) across windows.

    Trailing samples that do not fill a window are dropped.
    """
    if aggregate not in ("slope", "intercept", "stderr"):
        raise ValueError(f"unknown aggregate {aggregate!r}")
    x = np.asarray(x, dtype=float)
    if window < 2:
        raise ValueError("window must be >= 2")
    if window > len(x):
        raise ValueError("window longer than signal")
    stats = []
    t = np.arange(window, dtype=float)
    for start in range(0, len(x) - window + 1, window):
        sl, ic, se = _ols_line(t, x[start: start + window])
        stats.append({"slope": sl, "intercept": ic, "stderr": se}[aggregate])
    return float(np.mean(stats))


def autocorrelation(x: np.ndarray, lag: int) -> float:
    """(1/((n-lag) sigma^2)) sum (x_t - mu)(x_{t+lag} - mu), population
    variance convention so that lag 0 gives exactly 1.  Zero variance
    returns 0 with DegenerateSignalWarning."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if not (0 <= lag < n):
        raise ValueError("need 0 <= lag < len(x)")
    mu = x.mean()
    var = np.mean((x - mu) ** 2)
    if var == 0.0:
        warnings.warn("zero-variance signal in autocorrelation", DegenerateSignalWarning)
        return 0.0
    c = x - mu
    return float(np.dot(c[: n - lag], c[lag:]) / ((n - lag) * var))


def count_peaks(x: np.ndarray, support: int) -> int:
    """Number of samples strictly greater than their `support` neighbours
    on both sides (in-bounds comparisons only)."""
    if support < 1:
        raise ValueError("support must be >= 1")
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2 * support + 1:
        return 0
    core = x[support: n - support]
    is_peak = np.ones(len(core), dtype=bool)
    for j in range(1, support + 1):
        is_peak &= core > x[support - j: n - support - j]
        is_peak &= core > x[support + j: n - support + j]
    return int(is_peak.sum())


def energy_ratio_by_chunks(x: np.ndarray, chunk_count: int, j: int) -> float:
    """Energy of the j-th chunk (1-based) over total energy; chunks tile
    the signal as evenly as possible.  Zero total energy returns 0 with
    DegenerateSignalWarning."""
    if not (1 <= j <= chunk_count):
        raise ValueError("need 1 <= j <= chunk_count")
    x = np.asarray(x, dtype=float)
    total = float(x @ x)
    if total == 0.0:
        warnings.warn("zero-energy signal in energy_ratio_by_chunks", DegenerateSignalWarning)
        return 0.0
    chunk = np.array_split(x, chunk_count)[j - 1]
    return float(chunk @ chunk) / total
