"""k-nearest-neighbour voting with L1/L2 metrics.

Neighbour ties break on (distance, storage index); vote ties fall to the
lowest class id, making prediction deterministic.
"""

from __future__ import annotations

import numpy as np

from .base import Dataset


class KNearestNeighbors:
    kind = "knn"

    def __init__(self, k=5, metric="l2"):
        if k < 1:
            raise ValueError("k must be >= 1")
        if metric not in ("l1", "l2"):
            raise ValueError("metric must be 'l1' or 'l2'")
        self.k = k
        self.metric = metric

    def fit(self, ds: Dataset, seed: int = 0):
        if self.k > len(ds.y):
            raise ValueError(f"k={self.k} exceeds training size {len(ds.y)}")
        self.seed = seed
        self.X_ = ds.X.copy()
        self.y_ = ds.y.copy()
        self.n_classes_ = ds.n_classes
        self.n_features_ = ds.n_features
        return self

    def _distances(self, Q):
        diff = Q[:, None, :] - self.X_[None, :, :]
        if self.metric == "l1":
            return np.abs(diff).sum(axis=2)
        return np.sqrt((diff ** 2).sum(axis=2))

    def predict(self, X):
        Q = np.atleast_2d(np.asarray(X, dtype=float))
        dists = self._distances(Q)
        n = len(self.y_)
        order = np.lexsort((np.broadcast_to(np.arange(n), dists.shape), dists), axis=1)
        nearest = order[:, : self.k]
        out = np.empty(len(Q), dtype=int)
        for i, idx in enumerate(nearest):
            out[i] = np.argmax(np.bincount(self.y_[idx], minlength=self.n_classes_))
        return out

    def _state(self):
        meta = {"k": self.k, "metric": self.metric, "n_classes": self.n_classes_,
                "n_features": self.n_features_, "seed": self.seed}
        return meta, {"X": self.X_, "y": self.y_.astype(np.int64)}

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls(meta["k"], meta["metric"])
        model.X_ = arrays["X"]
        model.y_ = arrays["y"].astype(int)
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        return model
