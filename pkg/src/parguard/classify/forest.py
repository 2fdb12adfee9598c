"""Bagged CART forest with per-node feature subsampling."""

from __future__ import annotations

import numpy as np

from .base import Dataset
from .tree import DecisionTree


def _resolve_max_features(max_features, d):
    if max_features is None:
        return None
    if max_features == "sqrt":
        return max(1, int(np.sqrt(d)))
    return int(max_features)


class RandomForest:
    kind = "rf"

    def __init__(self, n_trees=100, max_depth=8, min_leaf=1,
                 max_features="sqrt", bootstrap=True):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap

    def fit(self, ds: Dataset, seed: int = 0):
        self.seed = seed
        self.n_classes_ = ds.n_classes
        self.n_features_ = ds.n_features
        mf = _resolve_max_features(self.max_features, ds.n_features)
        streams = np.random.SeedSequence(seed).spawn(self.n_trees)
        self.trees_ = []
        for ss in streams:
            rng = np.random.default_rng(ss)
            if self.bootstrap:
                idx = rng.integers(0, len(ds.y), len(ds.y))
                sub = ds.subset(np.sort(idx))
            else:
                sub = ds
            tree = DecisionTree(self.max_depth, self.min_leaf, mf)
            tree.fit(sub, rng=rng, n_classes=ds.n_classes)
            self.trees_.append(tree)
        return self

    def vote_counts(self, X):
        X = np.asarray(X, dtype=float)
        votes = np.zeros((len(X), self.n_classes_))
        for tree in self.trees_:
            votes[np.arange(len(X)), tree.predict(X)] += 1.0
        return votes

    def predict(self, X):
        return np.argmax(self.vote_counts(X), axis=1)

    def importances(self):
        """Mean per-tree normalized impurity decrease, renormalized to 1."""
        imp = np.mean([t.importances_ for t in self.trees_], axis=0)
        total = imp.sum()
        return imp / total if total > 0 else imp

    def _state(self):
        meta = {
            "n_trees": self.n_trees, "max_depth": self.max_depth,
            "min_leaf": self.min_leaf, "max_features": self.max_features,
            "bootstrap": self.bootstrap, "n_classes": self.n_classes_,
            "n_features": self.n_features_, "seed": self.seed,
        }
        arrays = {}
        for i, t in enumerate(self.trees_):
            _, ta = t._state()
            for k, v in ta.items():
                arrays[f"t{i}_{k}"] = v
        return meta, arrays

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls(meta["n_trees"], meta["max_depth"], meta["min_leaf"],
                    meta["max_features"], meta["bootstrap"])
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        model.trees_ = []
        for i in range(meta["n_trees"]):
            tmeta = {"max_depth": meta["max_depth"], "min_leaf": meta["min_leaf"],
                     "max_features": None, "n_classes": meta["n_classes"],
                     "n_features": meta["n_features"], "seed": meta["seed"]}
            tarrays = {k.split("_", 1)[1]: v for k, v in arrays.items()
                       if k.startswith(f"t{i}_")}
            model.trees_.append(DecisionTree._from_state(tmeta, tarrays))
        return model
