"""Metrics, stratified cross-validation, grid search and report tables.

Balanced accuracy is macro-averaged per-class recall; for two classes it
reduces to (TP/(TP+FN) + TN/(TN+FP)) / 2.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .classify import Dataset, ModelSpec, train


def confusion_matrix(y_true, y_pred, n_classes=None) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    k = n_classes or int(max(y_true.max(), y_pred.max())) + 1
    C = np.zeros((k, k), dtype=np.int64)
    np.add.at(C, (y_true, y_pred), 1)
    return C


def per_class_recall(confusion: np.ndarray) -> np.ndarray:
    C = np.asarray(confusion, dtype=float)
    totals = C.sum(axis=1)
    if np.any(totals == 0):
        empty = np.nonzero(totals == 0)[0]
        raise ValueError(f"class(es) {empty.tolist()} have no true samples")
    return np.diag(C) / totals


def balanced_accuracy(confusion: np.ndarray) -> float:
    """Mean per-class recall of a (true x predicted) count matrix."""
    return float(per_class_recall(confusion).mean())


@dataclass
class EvalReport:
    confusion: np.ndarray
    class_names: list
    balanced_acc: float = field(init=False)
    recalls: np.ndarray = field(init=False)
    timing: dict | None = None

    def __post_init__(self):
        self.recalls = per_class_recall(self.confusion)
        self.balanced_acc = float(self.recalls.mean())

    def rows(self):
        """Per-class (name, total, tp, fn, fp) in the published table shape."""
        C = self.confusion
        out = []
        for k, name in enumerate(self.class_names):
            total = int(C[k].sum())
            tp = int(C[k, k])
            out.append((name, total, tp, total - tp, int(C[:, k].sum()) - tp))
        return out

    def to_table_text(self, title="") -> str:
        lines = []
        if title:
            lines.append(title)
        header = f"{'Class':28s} {'Total':>8s} {'TP':>8s} {'FN':>6s} {'FP':>6s}"
        lines += [header, "-" * len(header)]
        for name, total, tp, fn, fp in self.rows():
            lines.append(f"{str(name):28s} {total:>8d} {tp:>8d} {fn:>6d} {fp:>6d}")
        lines.append(f"balanced accuracy = {self.balanced_acc:.4f}")
        return "\n".join(lines) + "\n"

    def to_delimited(self) -> str:
        lines = ["class\ttotal\ttp\tfn\tfp"]
        for name, total, tp, fn, fp in self.rows():
            lines.append(f"{name}\t{total}\t{tp}\t{fn}\t{fp}")
        lines.append(f"balanced_accuracy\t{self.balanced_acc:.6f}\t\t\t")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CVPlan:
    folds: int = 10
    stratified: bool = True
    seed: int = 0


def stratified_k_fold(y, plan: CVPlan) -> list[np.ndarray]:
    """Disjoint covering folds; per-fold class counts within +-1 of the
    proportional share.  Raises when a class is smaller than the fold count."""
    y = np.asarray(y, dtype=int)
    rng = np.random.default_rng(plan.seed)
    folds = [[] for _ in range(plan.folds)]
    classes, counts = np.unique(y, return_counts=True)
    for k, cnt in zip(classes, counts):
        if cnt < plan.folds:
            raise ValueError(
                f"class {k} has {cnt} samples, fewer than {plan.folds} folds"
            )
    if not plan.stratified:
        idx = rng.permutation(len(y))
        return [np.sort(chunk) for chunk in np.array_split(idx, plan.folds)]
    for j, k in enumerate(classes):
        idx = rng.permutation(np.nonzero(y == k)[0])
        chunks = np.array_split(idx, plan.folds)
        for c, chunk in enumerate(chunks):
            folds[(c + j) % plan.folds].extend(chunk)  # rotate for even totals
    return [np.sort(np.array(f, dtype=int)) for f in folds]


def cross_val_balanced_accuracy(ds: Dataset, spec: ModelSpec, plan: CVPlan,
                                seed: int = 0):
    """Mean CV balanced accuracy and the per-fold scores."""
    folds = stratified_k_fold(ds.y, plan)
    everything = np.arange(len(ds.y))
    scores = []
    for f, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(everything, test_idx)
        model = train(ds.subset(train_idx), spec, seed=seed + f)
        pred = model.predict(ds.X[test_idx])
        C = confusion_matrix(ds.y[test_idx], pred, ds.n_classes)
        scores.append(balanced_accuracy(C))
    return float(np.mean(scores)), scores


@dataclass
class GridSearchResult:
    best_spec: ModelSpec
    best_score: float
    table: list  # (spec, mean, std, status)


def grid_search(ds: Dataset, grid, plan: CVPlan, seed: int = 0) -> GridSearchResult:
    """Exhaustive CV over the grid; ties keep the earlier entry; failed
    cells are reported as such and never win."""
    if not grid:
        raise ValueError("empty grid")
    table = []
    best = None
    for spec in grid:
        try:
            mean, scores = cross_val_balanced_accuracy(ds, spec, plan, seed=seed)
            table.append((spec, mean, float(np.std(scores)), "ok"))
            if best is None or mean > best[1] + 1e-12:
                best = (spec, mean)
        except Exception as exc:  # noqa: BLE001 - cell failure must not kill the search
            table.append((spec, float("nan"), float("nan"), f"failed: {exc}"))
    if best is None:
        raise RuntimeError("every grid cell failed")
    return GridSearchResult(best_spec=best[0], best_score=best[1], table=table)


@dataclass
class TimingBlock:
    training_s: float
    testing_one_mean_s: float
    testing_one_std_s: float
    testing_all_s: float
    feature_extract_s: float | None = None

    COLUMNS = ("training", "testing-one", "testing-all", "feature-extract")

    def to_text(self) -> str:
        fe = "n/a" if self.feature_extract_s is None else f"{self.feature_extract_s:.6f}s"
        return (
            f"training        {self.training_s:.6f}s\n"
            f"testing-one     {self.testing_one_mean_s * 1e3:.4f}ms "
            f"(+-{self.testing_one_std_s * 1e3:.4f}ms over repeats)\n"
            f"testing-all     {self.testing_all_s:.6f}s\n"
            f"feature-extract {fe}\n"
        )


def timing_report(ds: Dataset, spec: ModelSpec, seed: int = 0, repeats: int = 100,
                  feature_extract_s: float | None = None) -> TimingBlock:
    """Train/test wall-clock block; single-instance latency is averaged
    over `repeats` runs."""
    t0 = time.perf_counter()
    model = train(ds, spec, seed=seed)
    t_train = time.perf_counter() - t0

    t0 = time.perf_counter()
    model.predict(ds.X)
    t_all = time.perf_counter() - t0

    one = ds.X[:1]
    lat = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        model.predict(one)
        lat.append(time.perf_counter() - t0)
    return TimingBlock(
        training_s=t_train,
        testing_one_mean_s=float(np.mean(lat)),
        testing_one_std_s=float(np.std(lat)),
        testing_all_s=t_all,
        feature_extract_s=feature_extract_s,
    )
