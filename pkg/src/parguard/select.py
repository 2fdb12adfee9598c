"""Feature ranking and selection: mRMR, forest importances, and the
decision-tree search over (wavelet function, level) candidates."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .classify import Dataset, DecisionTree, RandomForest
from .evaluate import balanced_accuracy, confusion_matrix
from .features import WaveletSpec
from .features.matrix import coeff_features


# ---------------------------------------------------------------------------
# mutual information on discretized columns
# ---------------------------------------------------------------------------

def equal_frequency_bins(x, bins: int = 10) -> np.ndarray:
    """Discretize a continuous column into (up to) `bins` equal-frequency
    codes; ties can merge bins, which is the desired heavy-tail behaviour."""
    x = np.asarray(x, dtype=float)
    edges = np.unique(np.quantile(x, np.linspace(0, 1, bins + 1)[1:-1]))
    return np.searchsorted(edges, x, side="right")


def mutual_information(x, y) -> float:
    """I(x;y) in nats from empirical joint counts of discrete codes."""
    x = np.asarray(x)
    y = np.asarray(y)
    if len(x) != len(y):
        raise ValueError("length mismatch")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    joint = np.zeros((xi.max() + 1, yi.max() + 1))
    np.add.at(joint, (xi, yi), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    mi = float(np.sum(joint[mask] * np.log(joint[mask] / (px @ py)[mask])))
    return max(mi, 0.0)


@dataclass
class SelectionResult:
    chosen: list
    scores: list
    method: str
    names: list | None = None

    def chosen_names(self):
        if self.names is None:
            return [str(i) for i in self.chosen]
        return [self.names[i] for i in self.chosen]

    def to_report(self, parameters: dict | None = None) -> str:
        payload = {
            "method": self.method,
            "parameters": parameters or {},
            "chosen": self.chosen_names(),
            "chosen_indices": [int(i) for i in self.chosen],
            "scores": [float(s) for s in self.scores],
        }
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def mrmr_select(X, y, count: int, bins: int = 10, names=None) -> SelectionResult:
    """Greedy max-relevance min-redundancy (difference form).

    First pick maximizes I(x;y); each later pick maximizes
    I(x;y) - mean_{s in chosen} I(x;x_s).  Ties break to the lower column
    index, making the selection deterministic.
    """
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    if not (1 <= count <= d):
        raise ValueError(f"count must be in [1, {d}]")
    cols = [equal_frequency_bins(X[:, j], bins) for j in range(d)]
    relevance = np.array([mutual_information(c, y) for c in cols])
    chosen, scores = [], []
    pair_cache: dict[tuple, float] = {}

    def pair_mi(a, b):
        key = (min(a, b), max(a, b))
        if key not in pair_cache:
            pair_cache[key] = mutual_information(cols[key[0]], cols[key[1]])
        return pair_cache[key]

    while len(chosen) < count:
        best_j, best_score = None, None
        for j in range(d):
            if j in chosen:
                continue
            if chosen:
                redundancy = np.mean([pair_mi(j, s) for s in chosen])
            else:
                redundancy = 0.0
            score = relevance[j] - redundancy
            if best_score is None or score > best_score + 1e-12:
                best_j, best_score = j, score
        chosen.append(best_j)
        scores.append(float(best_score))
    return SelectionResult(chosen=chosen, scores=scores, method="mrmr", names=names)


def rf_importance(X, y, n_trees: int = 100, max_depth: int = 8, seed: int = 0,
                  names=None) -> SelectionResult:
    """Mean-decrease-impurity importances from a fitted forest, normalized
    to sum to one; a single-class target yields all-zero importances."""
    y = np.asarray(y, dtype=int)
    if len(np.unique(y)) < 2:
        warnings.warn("single-class target: all importances are zero")
        imp = np.zeros(np.asarray(X).shape[1])
    else:
        forest = RandomForest(n_trees=n_trees, max_depth=max_depth).fit(
            Dataset(X, y), seed=seed
        )
        imp = forest.importances()
    order = np.argsort(-imp, kind="stable")
    return SelectionResult(
        chosen=[int(j) for j in order],
        scores=[float(imp[j]) for j in order],
        method="rf-importance",
        names=names,
    )


# ---------------------------------------------------------------------------
# decision-tree search over wavelet (function, level) candidates
# ---------------------------------------------------------------------------

@dataclass
class WaveletSearchResult:
    ranking: list  # (WaveletSpec, mean balanced accuracy), descending
    top: list = field(init=False)

    def __post_init__(self):
        self.top = self.ranking[: min(5, len(self.ranking))]


def _stratified_split(y, test_fraction, rng):
    train_idx, test_idx = [], []
    for k in np.unique(y):
        idx = rng.permutation(np.nonzero(y == k)[0])
        n_test = max(1, int(round(test_fraction * len(idx))))
        test_idx.extend(idx[:n_test])
        train_idx.extend(idx[n_test:])
    return np.sort(np.array(train_idx)), np.sort(np.array(test_idx))


def dt_wavelet_search(windows, y, candidates, runs: int = 5, seed: int = 0,
                      max_depth: int = 6, test_fraction: float = 0.2) -> WaveletSearchResult:
    """Rank (wavelet, level) candidates by the mean test balanced accuracy
    of a decision tree over `runs` stratified 80/20 resplits."""
    windows = np.asarray(windows, dtype=float)
    y = np.asarray(y, dtype=int)
    n_classes = int(y.max()) + 1
    results = []
    for spec in candidates:
        try:
            X = np.array([coeff_features(w, spec)[0] for w in windows])
        except Exception as exc:  # noqa: BLE001 - skip unusable candidates
            warnings.warn(f"{spec}: extraction failed ({exc}); candidate skipped")
            continue
        accs = []
        for r in range(runs):
            rng = np.random.default_rng((seed, r))
            tr, te = _stratified_split(y, test_fraction, rng)
            tree = DecisionTree(max_depth=max_depth).fit(
                Dataset(X[tr], y[tr]), n_classes=n_classes
            )
            C = confusion_matrix(y[te], tree.predict(X[te]), n_classes)
            accs.append(balanced_accuracy(C))
        results.append((spec, float(np.mean(accs))))
    ranking = sorted(results, key=lambda t: -t[1])
    return WaveletSearchResult(ranking=ranking)
