"""CART trees: gini classification and squared-error regression.

The splitter scans features in ascending index order and candidate
thresholds in ascending value order, improving only on strictly better
scores, which makes the documented tie-break (lower feature index, then
lower threshold) automatic and every tree bit-deterministic.
"""

from __future__ import annotations

import numpy as np

from .base import Dataset


def gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def _best_split_gini(X, y, n_classes, feature_ids, min_leaf):
    """Returns (feature, threshold, score) or None; score is the weighted
    child gini (lower is better)."""
    n = len(y)
    best = None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    for f in feature_ids:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        left_counts = np.cumsum(onehot[order], axis=0)
        total = left_counts[-1]
        splittable = np.nonzero(xs[:-1] < xs[1:])[0]  # split after position i
        for i in splittable:
            nl = i + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            cl = left_counts[i]
            cr = total - cl
            score = (nl * gini(cl) + nr * gini(cr)) / n
            if best is None or score < best[2] - 1e-15:
                best = (f, (xs[i] + xs[i + 1]) / 2.0, score)
    return best


def _best_split_sse(X, t, feature_ids, min_leaf):
    """Squared-error split for regression targets."""
    n = len(t)
    best = None
    for f in feature_ids:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ts = t[order]
        csum = np.cumsum(ts)
        csq = np.cumsum(ts * ts)
        total_sum, total_sq = csum[-1], csq[-1]
        splittable = np.nonzero(xs[:-1] < xs[1:])[0]
        for i in splittable:
            nl = i + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            sl, ql = csum[i], csq[i]
            sr, qr = total_sum - sl, total_sq - ql
            score = (ql - sl * sl / nl) + (qr - sr * sr / nr)
            if best is None or score < best[2] - 1e-15:
                best = (f, (xs[i] + xs[i + 1]) / 2.0, score)
    return best


class _TreeStore:
    """Flat array representation; index 0 is the root."""

    def __init__(self):
        self.feature = []   # -1 for leaves
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []     # class id or regression value

    def add(self, feature=-1, threshold=0.0, value=0.0):
        self.feature.append(feature)
        self.threshold.append(threshold)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.feature) - 1

    def freeze(self):
        self.feature = np.asarray(self.feature, dtype=np.int32)
        self.threshold = np.asarray(self.threshold, dtype=float)
        self.left = np.asarray(self.left, dtype=np.int32)
        self.right = np.asarray(self.right, dtype=np.int32)
        self.value = np.asarray(self.value, dtype=float)
        return self

    def predict_value(self, X):
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X))
        for r, x in enumerate(X):
            node = 0
            while self.feature[node] >= 0:
                node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
            out[r] = self.value[node]
        return out

    @property
    def n_nodes(self):
        return len(self.feature)


def _majority(y, n_classes):
    return int(np.argmax(np.bincount(y, minlength=n_classes)))


class DecisionTree:
    """Gini CART classifier with per-feature impurity-decrease tracking."""

    def __init__(self, max_depth=8, min_leaf=1, max_features=None):
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features

    def fit(self, ds: Dataset, seed: int = 0, rng=None, n_classes=None):
        # n_classes override: bootstrap samples may miss a class entirely
        self.n_classes_ = n_classes if n_classes is not None else ds.n_classes
        self.n_features_ = ds.n_features
        self.seed = seed
        self._store = _TreeStore()
        self.importances_ = np.zeros(ds.n_features)
        self._rng = rng if rng is not None else np.random.default_rng(seed)
        self._n_total = len(ds.y)
        self._grow(ds.X, ds.y, depth=0)
        self._store.freeze()
        total = self.importances_.sum()
        if total > 0:
            self.importances_ = self.importances_ / total
        return self

    def _feature_ids(self, d):
        if self.max_features is None or self.max_features >= d:
            return np.arange(d)
        return np.sort(self._rng.choice(d, self.max_features, replace=False))

    def _grow(self, X, y, depth):
        node = self._store.add(value=_majority(y, self.n_classes_))
        counts = np.bincount(y, minlength=self.n_classes_)
        if depth >= self.max_depth or counts.max() == len(y) or len(y) < 2 * self.min_leaf:
            return node
        split = _best_split_gini(X, y, self.n_classes_, self._feature_ids(X.shape[1]), self.min_leaf)
        if split is None:
            return node
        f, thr, score = split
        # split impure nodes even at zero immediate gain (XOR-style layouts
        # only pay off one level down); gain still drives the importances
        decrease = max(gini(counts) - score, 0.0)
        self.importances_[f] += decrease * (len(y) / self._n_total)
        mask = X[:, f] <= thr
        self._store.feature[node] = f
        self._store.threshold[node] = thr
        self._store.left[node] = self._grow(X[mask], y[mask], depth + 1)
        self._store.right[node] = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def predict(self, X):
        return self._store.predict_value(X).astype(int)

    @property
    def n_nodes(self):
        return self._store.n_nodes

    @property
    def n_leaves(self):
        return int(np.sum(np.asarray(self._store.feature) < 0))

    kind = "dt"

    def _state(self):
        meta = {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "max_features": self.max_features,
            "n_classes": self.n_classes_,
            "n_features": self.n_features_,
            "seed": self.seed,
        }
        s = self._store
        arrays = {
            "feature": s.feature, "threshold": s.threshold,
            "left": s.left, "right": s.right, "value": s.value,
            "importances": self.importances_,
        }
        return meta, arrays

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls(meta["max_depth"], meta["min_leaf"], meta["max_features"])
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        st = _TreeStore()
        st.feature = arrays["feature"].astype(np.int32)
        st.threshold = arrays["threshold"]
        st.left = arrays["left"].astype(np.int32)
        st.right = arrays["right"].astype(np.int32)
        st.value = arrays["value"]
        model._store = st
        model.importances_ = arrays["importances"]
        return model


class RegressionTree:
    """Squared-error CART for boosting residuals; leaf values can be
    overridden by a callback (used for the multinomial Newton step)."""

    def __init__(self, max_depth=3, min_leaf=1):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, X, target, leaf_value_fn=None):
        X = np.asarray(X, dtype=float)
        target = np.asarray(target, dtype=float)
        self._store = _TreeStore()
        self._leaf_fn = leaf_value_fn
        self._grow(X, target, np.arange(len(target)), depth=0)
        self._store.freeze()
        self._leaf_fn = None
        return self

    def _leaf_value(self, target, idx):
        if self._leaf_fn is not None:
            return float(self._leaf_fn(idx))
        return float(target.mean())

    def _grow(self, X, target, idx, depth):
        node = self._store.add(value=self._leaf_value(target, idx))
        if depth >= self.max_depth or len(target) < 2 * self.min_leaf or np.ptp(target) == 0.0:
            return node
        split = _best_split_sse(X, target, np.arange(X.shape[1]), self.min_leaf)
        if split is None:
            return node
        f, thr, _ = split
        mask = X[:, f] <= thr
        self._store.feature[node] = f
        self._store.threshold[node] = thr
        self._store.left[node] = self._grow(X[mask], target[mask], idx[mask], depth + 1)
        self._store.right[node] = self._grow(X[~mask], target[~mask], idx[~mask], depth + 1)
        return node

    def predict(self, X):
        return self._store.predict_value(X)
