"""Gaussian naive Bayes with a variance floor."""

from __future__ import annotations

import warnings

import numpy as np

from .base import Dataset, DegenerateClassWarning

VAR_FLOOR_FRACTION = 1e-9


class GaussianNaiveBayes:
    kind = "gnb"

    def __init__(self):
        pass

    def fit(self, ds: Dataset, seed: int = 0):
        self.seed = seed
        X, y = ds.X, ds.y
        K, d = ds.n_classes, ds.n_features
        self.n_classes_ = K
        self.n_features_ = d
        self.priors_ = np.bincount(y, minlength=K) / len(y)
        self.means_ = np.zeros((K, d))
        self.vars_ = np.zeros((K, d))
        floor = VAR_FLOOR_FRACTION * float(np.mean(np.var(X, axis=0)))
        floor = max(floor, 1e-300)
        for k in range(K):
            rows = X[y == k]
            if len(rows) == 1:
                warnings.warn(
                    f"class {k} has a single sample; variance floored",
                    DegenerateClassWarning,
                )
            self.means_[k] = rows.mean(axis=0)
            self.vars_[k] = np.maximum(rows.var(axis=0), floor)
        return self

    def log_posterior(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(X), self.n_classes_))
        for k in range(self.n_classes_):
            ll = -0.5 * np.sum(
                np.log(2 * np.pi * self.vars_[k])
                + (X - self.means_[k]) ** 2 / self.vars_[k],
                axis=1,
            )
            out[:, k] = np.log(np.clip(self.priors_[k], 1e-300, None)) + ll
        return out

    def predict_proba(self, X):
        lp = self.log_posterior(X)
        lp = lp - lp.max(axis=1, keepdims=True)
        p = np.exp(lp)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X):
        return np.argmax(self.log_posterior(X), axis=1)

    def _state(self):
        meta = {"n_classes": self.n_classes_, "n_features": self.n_features_,
                "seed": self.seed}
        return meta, {"priors": self.priors_, "means": self.means_, "vars": self.vars_}

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls()
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        model.priors_ = arrays["priors"]
        model.means_ = arrays["means"]
        model.vars_ = arrays["vars"]
        return model
