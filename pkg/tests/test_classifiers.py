"""From-scratch classifier contracts: spec examples, determinism,
invariances, gradient checks, persistence round-trips."""

import numpy as np
import pytest

from parguard.classify import (
    Dataset,
    DecisionTree,
    GaussianNaiveBayes,
    GradientBoosting,
    KNearestNeighbors,
    MLP,
    ModelSpec,
    RandomForest,
    load_model,
    save_model,
    train,
)


def blobs(rng, n_per=60, centers=((0, 0), (4, 4)), spread=0.6):
    X, y = [], []
    for label, c in enumerate(centers):
        X.append(rng.normal(loc=c, scale=spread, size=(n_per, len(c))))
        y.append(np.full(n_per, label))
    return Dataset(np.vstack(X), np.concatenate(y))


# ---------------------------------------------------------------------------
# dataset validation
# ---------------------------------------------------------------------------

def test_dataset_validation():
    with pytest.raises(ValueError, match="contiguous"):
        Dataset(np.zeros((4, 2)), [1, 1, 2, 2])
    with pytest.raises(ValueError, match="non-finite"):
        Dataset(np.array([[np.nan, 1.0], [0.0, 1.0]]), [0, 1])
    with pytest.raises(ValueError, match="at least 2"):
        Dataset(np.zeros((1, 2)), [0])


# ---------------------------------------------------------------------------
# decision tree
# ---------------------------------------------------------------------------

def test_dt_single_class_single_leaf():
    ds = Dataset(np.random.default_rng(0).normal(size=(20, 3)), np.zeros(20, dtype=int))
    tree = DecisionTree(max_depth=5).fit(ds)
    assert tree.n_nodes == 1 and tree.n_leaves == 1
    assert np.all(tree.predict(ds.X) == 0)


def test_dt_xor_exact():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    y = np.array([0, 1, 1, 0])
    tree = DecisionTree(max_depth=2).fit(Dataset(X, y))
    assert np.array_equal(tree.predict(X), y)


def test_dt_depth1_separable():
    X = np.linspace(0, 1, 20).reshape(-1, 1)
    y = (X[:, 0] > 0.5).astype(int)
    tree = DecisionTree(max_depth=1).fit(Dataset(X, y))
    assert np.array_equal(tree.predict(X), y)


def test_dt_monotone_transform_invariance(rng):
    # the induced sample partition is threshold-order based, so it is
    # invariant under a strictly monotone remap of one column; compare
    # predictions at the training points (where bracketing is preserved)
    ds = blobs(rng)
    Xc = ds.X.copy()
    Xc[:, 0] = Xc[:, 0] ** 3
    t1 = DecisionTree(max_depth=4).fit(ds)
    t2 = DecisionTree(max_depth=4).fit(Dataset(Xc, ds.y))
    assert np.array_equal(t1.predict(ds.X), t2.predict(Xc))


# ---------------------------------------------------------------------------
# random forest
# ---------------------------------------------------------------------------

def test_rf_degenerates_to_dt(rng):
    ds = blobs(rng)
    rf = RandomForest(n_trees=1, max_features=None, bootstrap=False).fit(ds, seed=3)
    dt = DecisionTree(max_depth=8).fit(ds, seed=3)
    q = rng.normal(loc=2, scale=3, size=(100, 2))
    assert np.array_equal(rf.predict(q), dt.predict(q))


def test_rf_blob_accuracy(rng):
    train_ds = blobs(rng, n_per=100)
    test_ds = blobs(rng, n_per=100)
    rf = RandomForest(n_trees=30, max_depth=6).fit(train_ds, seed=0)
    acc = np.mean(rf.predict(test_ds.X) == test_ds.y)
    assert acc >= 0.95


def test_rf_vote_order_invariance(rng):
    ds = blobs(rng)
    rf = RandomForest(n_trees=9, max_depth=4).fit(ds, seed=1)
    q = rng.normal(size=(40, 2))
    before = rf.predict(q)
    rf.trees_ = rf.trees_[::-1]
    assert np.array_equal(before, rf.predict(q))


def test_rf_determinism(rng):
    ds = blobs(rng)
    q = rng.normal(size=(30, 2))
    a = RandomForest(n_trees=11, max_depth=5).fit(ds, seed=42).predict(q)
    b = RandomForest(n_trees=11, max_depth=5).fit(ds, seed=42).predict(q)
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# gradient boosting
# ---------------------------------------------------------------------------

def test_gb_zero_rate_limit_predicts_priors(rng):
    X = rng.normal(size=(90, 3))
    y = np.array([0] * 60 + [1] * 30)
    gb = GradientBoosting(learning_rate=1e-12, n_estimators=1).fit(Dataset(X, y))
    assert np.all(gb.predict(rng.normal(size=(50, 3))) == 0)


def test_gb_deviance_monotone_nonincreasing(rng):
    ds = blobs(rng, n_per=40)
    gb = GradientBoosting(learning_rate=0.1, n_estimators=40, max_depth=2,
                          subsample=1.0).fit(ds, seed=0)
    dev = np.array(gb.train_deviance_)
    assert np.all(np.diff(dev) <= 1e-12)


def test_gb_two_blobs_training_accuracy(rng):
    ds = blobs(rng, n_per=50)
    gb = GradientBoosting(learning_rate=0.1, n_estimators=50, max_depth=2).fit(ds)
    assert np.mean(gb.predict(ds.X) == ds.y) == 1.0


def test_gb_rejects_bad_learning_rate():
    with pytest.raises(ValueError):
        GradientBoosting(learning_rate=0.0)
    with pytest.raises(ValueError):
        GradientBoosting(learning_rate=-0.5)


def test_gb_multiclass(rng):
    ds = blobs(rng, n_per=40, centers=((0, 0), (4, 0), (2, 4)))
    gb = GradientBoosting(learning_rate=0.2, n_estimators=40, max_depth=2).fit(ds)
    assert np.mean(gb.predict(ds.X) == ds.y) >= 0.98


def test_gb_more_rounds_not_worse(rng):
    ds = blobs(rng, n_per=40)
    g1 = GradientBoosting(learning_rate=0.1, n_estimators=10, max_depth=2).fit(ds)
    g2 = GradientBoosting(learning_rate=0.1, n_estimators=40, max_depth=2).fit(ds)
    assert g2.train_deviance_[-1] <= g1.train_deviance_[-1] + 1e-12


# ---------------------------------------------------------------------------
# k nearest neighbours
# ---------------------------------------------------------------------------

def test_knn_k1_memorizes(rng):
    X = rng.normal(size=(30, 4))
    y = rng.integers(0, 3, 30)
    y[0] = 0  # keep labels contiguous from 0
    ds = Dataset(X, y - y.min())
    knn = KNearestNeighbors(k=1).fit(ds)
    assert np.array_equal(knn.predict(X), ds.y)


def test_knn_k_equals_n_tie_breaks_low_class():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 1, 0, 1])
    knn = KNearestNeighbors(k=4).fit(Dataset(X, y))
    assert knn.predict([[10.0]])[0] == 0


def test_knn_l1_l2_disagree_on_construction():
    # from the origin: (2,0) is L1-closer, (1.2,1.2) is L2-closer
    X = np.array([[2.0, 0.0], [1.2, 1.2], [9.0, 9.0]])
    y = np.array([0, 1, 1])
    q = [[0.0, 0.0]]
    assert KNearestNeighbors(k=1, metric="l1").fit(Dataset(X, y)).predict(q)[0] == 0
    assert KNearestNeighbors(k=1, metric="l2").fit(Dataset(X, y)).predict(q)[0] == 1


def test_knn_rejects_k_over_n():
    with pytest.raises(ValueError):
        KNearestNeighbors(k=10).fit(Dataset(np.zeros((4, 1)), [0, 1, 0, 1]))


# ---------------------------------------------------------------------------
# gaussian naive bayes
# ---------------------------------------------------------------------------

def test_gnb_boundary_matches_analytic_crossover(rng):
    n = 4000
    X = np.concatenate([rng.normal(0, 1, n), rng.normal(4, 1, n)]).reshape(-1, 1)
    y = np.array([0] * n + [1] * n)
    gnb = GaussianNaiveBayes().fit(Dataset(X, y))
    # closed-form crossover of the two fitted gaussians (equal priors)
    m0, m1 = gnb.means_[0, 0], gnb.means_[1, 0]
    v0, v1 = gnb.vars_[0, 0], gnb.vars_[1, 0]
    a = 0.5 * (1 / v0 - 1 / v1)
    b = m1 / v1 - m0 / v0
    c = 0.5 * (m0 ** 2 / v0 - m1 ** 2 / v1) + 0.5 * np.log(v1 / v0)
    roots = np.roots([a, b, c]) if abs(a) > 1e-12 else np.array([-c / b])
    analytic = roots[np.argmin(np.abs(roots - 2.0))].real
    grid = np.linspace(0, 4, 4001).reshape(-1, 1)
    pred = gnb.predict(grid)
    flip = grid[np.argmax(pred == 1), 0]
    assert abs(flip - analytic) <= 0.02 * abs(analytic)


def test_gnb_identical_conditionals_predict_prior(rng):
    X = np.tile(rng.normal(size=(50, 2)), (2, 1))
    y = np.array([0] * 50 + [1] * 50)
    # tilt the priors toward class 1 by dropping some class-0 rows
    keep = np.concatenate([np.arange(20), np.arange(50, 100)])
    gnb = GaussianNaiveBayes().fit(Dataset(X[keep], (y[keep] == 1).astype(int)))
    assert np.all(gnb.predict(rng.normal(size=(30, 2))) == 1)


def test_gnb_scale_invariant_predictions(rng):
    ds = blobs(rng)
    q = rng.normal(loc=2, scale=2, size=(60, 2))
    g1 = GaussianNaiveBayes().fit(ds)
    g2 = GaussianNaiveBayes().fit(Dataset(ds.X * 13.0, ds.y))
    assert np.array_equal(g1.predict(q), g2.predict(q * 13.0))


def test_gnb_posteriors_sum_to_one(rng):
    ds = blobs(rng, centers=((0, 0), (3, 1), (1, 4)))
    gnb = GaussianNaiveBayes().fit(ds)
    p = gnb.predict_proba(rng.normal(size=(40, 2)) * 5)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)


def test_gnb_single_sample_class_flagged(rng):
    X = np.vstack([rng.normal(size=(10, 2)), [[5.0, 5.0]]])
    y = np.array([0] * 10 + [1])
    from parguard.classify import DegenerateClassWarning
    with pytest.warns(DegenerateClassWarning):
        GaussianNaiveBayes().fit(Dataset(X, y))


# ---------------------------------------------------------------------------
# MLP
# ---------------------------------------------------------------------------

def test_mlp_rejects_zero_hidden_layers():
    with pytest.raises(ValueError):
        MLP(hidden_sizes=())


def test_mlp_gradient_matches_central_differences(rng):
    X = rng.normal(size=(3, 4))
    y = np.array([0, 2, 1])
    net = MLP(hidden_sizes=(5,), activation="tanh", l2_alpha=0.01)
    net.n_classes_ = 3
    params = net._init_params(4, 3, rng)
    loss, grads = net.loss_and_grad(params, X, y)
    eps = 1e-6
    for li, (W, b) in enumerate(params):
        for arr, g in ((W, grads[li][0]), (b, grads[li][1])):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                old = arr[ix]
                arr[ix] = old + eps
                lp, _ = net.loss_and_grad(params, X, y)
                arr[ix] = old - eps
                lm, _ = net.loss_and_grad(params, X, y)
                arr[ix] = old
                fd = (lp - lm) / (2 * eps)
                denom = max(abs(fd), abs(g[ix]), 1e-8)
                assert abs(fd - g[ix]) / denom < 1e-5


def test_mlp_xor_convergence():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    y = np.array([0, 1, 1, 0])
    wins = 0
    for seed in range(10):
        net = MLP(hidden_sizes=(4,), activation="tanh", l2_alpha=1e-5,
                  learning_rate=0.05, epochs=2000, batch_size=4)
        net.fit(Dataset(X, y), seed=seed)
        if np.array_equal(net.predict(X), y):
            wins += 1
    assert wins >= 8


def test_mlp_determinism(rng):
    ds = blobs(rng, n_per=30)
    q = rng.normal(size=(20, 2))
    a = MLP(hidden_sizes=(8,), epochs=50).fit(ds, seed=5).predict(q)
    b = MLP(hidden_sizes=(8,), epochs=50).fit(ds, seed=5).predict(q)
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# uniform train() entry point + persistence
# ---------------------------------------------------------------------------

ALL_SPECS = [
    ModelSpec("dt", {"max_depth": 4}),
    ModelSpec("rf", {"n_trees": 7, "max_depth": 4}),
    ModelSpec("gb", {"learning_rate": 0.2, "n_estimators": 8, "max_depth": 2}),
    ModelSpec("knn", {"k": 3, "metric": "l1"}),
    ModelSpec("gnb", {}),
    ModelSpec("mlp", {"hidden_sizes": (6,), "epochs": 30}),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_persistence_roundtrip(spec, rng, tmp_path):
    ds = blobs(rng, n_per=25, centers=((0, 0), (3, 3), (0, 4)))
    model = train(ds, spec, seed=9)
    q = rng.normal(loc=1.5, scale=2, size=(40, 2))
    before = model.predict(q)
    path = tmp_path / f"{spec.kind}.pgm"
    save_model(model, path, extra_meta={"note": "test"})
    loaded = load_model(path)
    assert np.array_equal(before, loaded.predict(q))
    assert path.with_suffix(".pgm.txt").exists()


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_retrain_reproducibility(spec, rng):
    ds = blobs(rng, n_per=25)
    q = rng.normal(size=(30, 2))
    a = train(ds, spec, seed=77).predict(q)
    b = train(ds, spec, seed=77).predict(q)
    assert np.array_equal(a, b)


def test_modelspec_validation():
    with pytest.raises(ValueError):
        ModelSpec("svm")
