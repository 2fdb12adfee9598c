"""Shared dataset/model contracts for the from-scratch classifiers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class DegenerateClassWarning(UserWarning):
    """Training hit a degenerate class layout (e.g. single-sample class)."""


class TrainingDiverged(RuntimeError):
    """Iterative training produced a non-finite loss."""


@dataclass
class Dataset:
    """Feature matrix with small-integer class labels, contiguous from 0."""

    X: np.ndarray
    y: np.ndarray
    schema: list | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D")
        if len(self.X) != len(self.y):
            raise ValueError("X and y length mismatch")
        if len(self.X) < 2:
            raise ValueError("need at least 2 samples")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("X contains non-finite entries")
        classes = np.unique(self.y)
        if classes[0] != 0 or not np.array_equal(classes, np.arange(len(classes))):
            raise ValueError("labels must be contiguous integers starting at 0")
        if self.schema is not None and len(self.schema) != self.X.shape[1]:
            raise ValueError("schema length mismatch")

    @property
    def n_classes(self) -> int:
        return int(self.y.max()) + 1

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, idx) -> "Dataset":
        ds = object.__new__(Dataset)
        ds.X = self.X[idx]
        ds.y = self.y[idx]
        ds.schema = self.schema
        return ds


@dataclass(frozen=True)
class ModelSpec:
    """A classifier kind plus its hyperparameter map."""

    kind: str
    params: dict = field(default_factory=dict)

    _KINDS = ("dt", "rf", "gb", "knn", "gnb", "mlp")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; one of {self._KINDS}")

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({inner})"


def train(ds: Dataset, spec: ModelSpec, seed: int = 0):
    """Uniform entry point: fit the requested model kind on the dataset."""
    from .tree import DecisionTree
    from .forest import RandomForest
    from .boosting import GradientBoosting
    from .neighbors import KNearestNeighbors
    from .bayes import GaussianNaiveBayes
    from .mlp import MLP

    cls = {
        "dt": DecisionTree,
        "rf": RandomForest,
        "gb": GradientBoosting,
        "knn": KNearestNeighbors,
        "gnb": GaussianNaiveBayes,
        "mlp": MLP,
    }[spec.kind]
    model = cls(**spec.params)
    model.fit(ds, seed=seed)
    return model
