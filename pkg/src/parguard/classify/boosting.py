"""Gradient boosting with multinomial deviance.

One squared-error regression tree per class per round fits the negative
gradient (class indicator minus softmax probability); leaf values take
the usual one-step Newton form and are shrunk by the learning rate.
Raw scores start at the log class priors, so the zero-learning-rate
limit predicts priors.
"""

from __future__ import annotations

import numpy as np

from .base import Dataset, TrainingDiverged
from .tree import RegressionTree


def _softmax(F):
    z = F - F.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class GradientBoosting:
    kind = "gb"

    def __init__(self, learning_rate=0.1, n_estimators=100, max_depth=3,
                 subsample=1.0, min_leaf=1):
        if learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not (0 < subsample <= 1):
            raise ValueError("subsample must be in (0, 1]")
        self.learning_rate = learning_rate
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.subsample = subsample
        self.min_leaf = min_leaf

    def fit(self, ds: Dataset, seed: int = 0):
        self.seed = seed
        rng = np.random.default_rng(seed)
        X, y = ds.X, ds.y
        n, K = len(y), ds.n_classes
        self.n_classes_ = K
        self.n_features_ = ds.n_features
        priors = np.bincount(y, minlength=K) / n
        self.base_score_ = np.log(np.clip(priors, 1e-12, None))
        Y = np.zeros((n, K))
        Y[np.arange(n), y] = 1.0
        F = np.tile(self.base_score_, (n, 1))
        self.trees_ = []          # list of per-round lists, one tree per class
        self.train_deviance_ = []
        for _ in range(self.n_estimators):
            P = _softmax(F)
            if self.subsample < 1.0:
                m = max(1, int(round(self.subsample * n)))
                rows = np.sort(rng.choice(n, m, replace=False))
            else:
                rows = np.arange(n)
            round_trees = []
            for k in range(K):
                resid = Y[:, k] - P[:, k]

                def newton_leaf(idx, resid=resid, rows=rows):
                    r = resid[rows[idx]]
                    num = r.sum()
                    den = np.sum((Y[rows[idx], k] - r) * (1.0 - Y[rows[idx], k] + r))
                    if den < 1e-12:
                        return 0.0
                    return (K - 1) / K * num / den

                tree = RegressionTree(self.max_depth, self.min_leaf)
                tree.fit(X[rows], resid[rows], leaf_value_fn=newton_leaf)
                F[:, k] += self.learning_rate * tree.predict(X)
                round_trees.append(tree)
            self.trees_.append(round_trees)
            dev = -np.mean(np.log(np.clip(_softmax(F)[np.arange(n), y], 1e-300, None)))
            if not np.isfinite(dev):
                raise TrainingDiverged(f"non-finite deviance at round {len(self.trees_)}")
            self.train_deviance_.append(float(dev))
        return self

    def decision_scores(self, X):
        X = np.asarray(X, dtype=float)
        F = np.tile(self.base_score_, (len(X), 1))
        for round_trees in self.trees_:
            for k, tree in enumerate(round_trees):
                F[:, k] += self.learning_rate * tree.predict(X)
        return F

    def predict_proba(self, X):
        return _softmax(self.decision_scores(X))

    def predict(self, X):
        return np.argmax(self.decision_scores(X), axis=1)

    def _state(self):
        meta = {
            "learning_rate": self.learning_rate, "n_estimators": self.n_estimators,
            "max_depth": self.max_depth, "subsample": self.subsample,
            "min_leaf": self.min_leaf, "n_classes": self.n_classes_,
            "n_features": self.n_features_, "seed": self.seed,
            "n_rounds": len(self.trees_),
        }
        arrays = {"base_score": self.base_score_,
                  "train_deviance": np.asarray(self.train_deviance_)}
        for r, round_trees in enumerate(self.trees_):
            for k, tree in enumerate(round_trees):
                s = tree._store
                for name, arr in (("feature", s.feature), ("threshold", s.threshold),
                                  ("left", s.left), ("right", s.right), ("value", s.value)):
                    arrays[f"r{r}k{k}_{name}"] = arr
        return meta, arrays

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls(meta["learning_rate"], meta["n_estimators"], meta["max_depth"],
                    meta["subsample"], meta["min_leaf"])
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        model.base_score_ = arrays["base_score"]
        model.train_deviance_ = list(arrays["train_deviance"])
        from .tree import _TreeStore
        model.trees_ = []
        for r in range(meta["n_rounds"]):
            round_trees = []
            for k in range(meta["n_classes"]):
                st = _TreeStore()
                st.feature = arrays[f"r{r}k{k}_feature"].astype(np.int32)
                st.threshold = arrays[f"r{r}k{k}_threshold"]
                st.left = arrays[f"r{r}k{k}_left"].astype(np.int32)
                st.right = arrays[f"r{r}k{k}_right"].astype(np.int32)
                st.value = arrays[f"r{r}k{k}_value"]
                tree = RegressionTree(meta["max_depth"], meta["min_leaf"])
                tree._store = st
                round_trees.append(tree)
            model.trees_.append(round_trees)
        return model
