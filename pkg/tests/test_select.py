"""Feature selection: mutual information, mRMR greedy vs exhaustive
oracle, forest importances, and the wavelet-candidate search."""

import math

import numpy as np
import pytest

from parguard.features import WaveletSpec
from parguard.select import (
    SelectionResult,
    WaveletSearchResult,
    dt_wavelet_search,
    equal_frequency_bins,
    mrmr_select,
    mutual_information,
    rf_importance,
)


# ---------------------------------------------------------------------------
# independent oracle: plain-loop MI and naive greedy selection
# ---------------------------------------------------------------------------

def oracle_mi(x, y):
    n = len(x)
    acc = 0.0
    for xv in set(x):
        for yv in set(y):
            pxy = sum(1 for a, b in zip(x, y) if a == xv and b == yv) / n
            if pxy == 0:
                continue
            px = sum(1 for a in x if a == xv) / n
            py = sum(1 for b in y if b == yv) / n
            acc += pxy * math.log(pxy / (px * py))
    return acc


def oracle_greedy_mrmr(cols, y, count):
    """Naive recomputation of the incremental criterion at every step."""
    chosen = []
    while len(chosen) < count:
        best_j, best_score = None, None
        for j in range(len(cols)):
            if j in chosen:
                continue
            rel = oracle_mi(cols[j], y)
            red = (sum(oracle_mi(cols[j], cols[s]) for s in chosen) / len(chosen)
                   if chosen else 0.0)
            score = rel - red
            if best_score is None or score > best_score + 1e-12:
                best_j, best_score = j, score
        chosen.append(best_j)
    return chosen


# ---------------------------------------------------------------------------
# mutual information
# ---------------------------------------------------------------------------

def test_mi_constant_is_zero():
    assert mutual_information(np.zeros(40, dtype=int), np.arange(40) % 3) == 0.0


def test_mi_identity_binary_balanced():
    y = np.array([0, 1] * 50)
    assert abs(mutual_information(y, y) - math.log(2)) < 1e-12


def test_mi_hand_computed_three_class():
    x = np.array([0] * 30 + [1] * 30 + [2] * 40)
    y = np.array([0] * 20 + [1] * 10 + [1] * 25 + [2] * 5 + [2] * 40)
    assert abs(mutual_information(x, y) - oracle_mi(list(x), list(y))) < 1e-12


def test_mi_symmetry(rng):
    x = rng.integers(0, 4, 200)
    y = rng.integers(0, 3, 200)
    assert abs(mutual_information(x, y) - mutual_information(y, x)) < 1e-14


def test_mi_nonnegative(rng):
    for _ in range(20):
        x = rng.integers(0, 5, 100)
        y = rng.integers(0, 5, 100)
        assert mutual_information(x, y) >= 0.0


# ---------------------------------------------------------------------------
# mRMR
# ---------------------------------------------------------------------------

def test_mrmr_single_candidate(rng):
    X = rng.normal(size=(50, 1))
    y = rng.integers(0, 2, 50)
    res = mrmr_select(X, y, 1)
    assert res.chosen == [0]


def test_mrmr_penalizes_duplicate(rng):
    n = 400
    y = rng.integers(0, 2, n)
    strong = y + rng.normal(0, 0.05, n)        # near-perfect predictor
    dup = strong.copy()                         # exact duplicate
    other = np.where(y == 1, rng.normal(2, 1, n), rng.normal(-2, 1, n))
    X = np.column_stack([strong, dup, other])
    res = mrmr_select(X, y, 2)
    assert res.chosen[0] in (0, 1)
    assert res.chosen[1] == 2  # redundancy pushes the copy below the fresh feature


def test_mrmr_full_count_orders_all(rng):
    X = rng.normal(size=(60, 5))
    y = rng.integers(0, 3, 60)
    res = mrmr_select(X, y, 5)
    assert sorted(res.chosen) == [0, 1, 2, 3, 4]
    assert len(res.scores) == 5


def test_mrmr_matches_exhaustive_incremental_oracle(rng):
    agree = 0
    for trial in range(50):
        d = int(rng.integers(2, 9))
        s = int(rng.integers(1, min(3, d) + 1))
        n = 60
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 3, n)
        if trial % 2:  # give some features real signal
            X[:, 0] += y * rng.uniform(0.5, 2.0)
        res = mrmr_select(X, y, s, bins=4)
        cols = [list(equal_frequency_bins(X[:, j], 4)) for j in range(d)]
        if res.chosen == oracle_greedy_mrmr(cols, list(y), s):
            agree += 1
    assert agree == 50


def test_mrmr_invariant_to_monotone_transform(rng):
    X = rng.normal(size=(80, 4))
    y = rng.integers(0, 2, 80)
    res1 = mrmr_select(X, y, 3)
    X2 = X.copy()
    X2[:, 1] = np.exp(X2[:, 1])  # strictly monotone; equal-frequency bins unchanged
    res2 = mrmr_select(X2, y, 3)
    assert res1.chosen == res2.chosen


# ---------------------------------------------------------------------------
# random forest importances
# ---------------------------------------------------------------------------

def test_rf_importance_separating_feature_wins(rng):
    n = 120
    y = rng.integers(0, 2, n)
    X = rng.normal(size=(n, 4))
    X[:, 2] = y * 4.0 + rng.normal(0, 0.05, n)
    for seed in range(20):
        res = rf_importance(X, y, n_trees=15, max_depth=4, seed=seed)
        assert res.chosen[0] == 2


def test_rf_importance_normalized(rng):
    X = rng.normal(size=(80, 5))
    y = (X[:, 0] + X[:, 3] > 0).astype(int)
    res = rf_importance(X, y, n_trees=10, seed=1)
    assert abs(sum(res.scores) - 1.0) < 1e-9


def test_rf_importance_uninformative_features_indistinguishable(rng):
    # permutation baseline: each run permutes the (independent) target so
    # the data-level chance structure is resampled along with the forest
    n, d = 200, 5
    X = rng.normal(size=(n, d))
    y = rng.integers(0, 2, n)
    per_run = []
    for seed in range(20):
        yp = np.random.default_rng(seed).permutation(y)
        res = rf_importance(X, yp, n_trees=10, max_depth=4, seed=seed)
        imp = np.empty(d)
        imp[res.chosen] = res.scores
        per_run.append(imp)
    per_run = np.array(per_run)
    means = per_run.mean(axis=0)
    mc_std = per_run.std(axis=0).mean()
    assert np.ptp(means) < 3 * mc_std


def test_rf_importance_single_class_flagged(rng):
    X = rng.normal(size=(30, 3))
    with pytest.warns(UserWarning, match="single-class"):
        res = rf_importance(X, np.zeros(30, dtype=int))
    assert all(s == 0.0 for s in res.scores)


# ---------------------------------------------------------------------------
# decision-tree wavelet search
# ---------------------------------------------------------------------------

def _windows_with_classes(rng, n_per=20, n_c=64):
    """Two classes: smooth sine vs spiky bursts; easily separable."""
    windows, labels = [], []
    t = np.arange(n_c)
    for i in range(n_per):
        w = np.array([np.sin(2 * np.pi * t / 32 + p) for p in (0, 2, 4)])
        windows.append(w + rng.normal(0, 0.01, (3, n_c)))
        labels.append(0)
    for i in range(n_per):
        w = rng.normal(0, 0.1, (3, n_c))
        w[:, rng.integers(5, n_c - 5)] += 8.0
        windows.append(w)
        labels.append(1)
    return np.array(windows), np.array(labels)


def test_search_single_candidate(rng):
    windows, y = _windows_with_classes(rng)
    res = dt_wavelet_search(windows, y, [WaveletSpec("db2", 2)], runs=2, seed=0)
    assert len(res.ranking) == 1
    assert isinstance(res, WaveletSearchResult)


def test_search_separable_ranks_first(rng):
    windows, y = _windows_with_classes(rng)
    cands = [WaveletSpec("db1", 1), WaveletSpec("db4", 3)]
    res = dt_wavelet_search(windows, y, cands, runs=3, seed=1)
    assert res.ranking[0][1] == 1.0


def test_search_top_k_size(rng):
    windows, y = _windows_with_classes(rng, n_per=12)
    cands = [WaveletSpec("db1", lvl) for lvl in (1, 2, 3)] + [
        WaveletSpec("sym2", lvl) for lvl in (1, 2, 3)
    ]
    res = dt_wavelet_search(windows, y, cands, runs=2, seed=2)
    assert len(res.top) == 5
    res2 = dt_wavelet_search(windows, y, cands[:2], runs=2, seed=2)
    assert len(res2.top) == 2


def test_selection_report_shape(rng):
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 2, 40)
    res = mrmr_select(X, y, 2, names=["a", "b", "c"])
    text = res.to_report({"bins": 10})
    assert '"method": "mrmr"' in text and '"chosen"' in text
