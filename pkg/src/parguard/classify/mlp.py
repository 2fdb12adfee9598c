"""Feed-forward softmax classifier trained with mini-batch Adam.

Loss = mean cross-entropy + 0.5 * l2_alpha * ||W||^2 / batch_size
(biases unpenalized).  The 'adaptive' schedule divides the step size by
5 whenever the epoch loss fails to improve twice in a row.
"""

from __future__ import annotations

import numpy as np

from .base import Dataset, TrainingDiverged

ACTIVATIONS = {
    "relu": (lambda z: np.maximum(z, 0.0), lambda z: (z > 0).astype(float)),
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "logistic": (
        lambda z: 1.0 / (1.0 + np.exp(-z)),
        lambda z: (1.0 / (1.0 + np.exp(-z))) * (1.0 - 1.0 / (1.0 + np.exp(-z))),
    ),
}


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class MLP:
    kind = "mlp"

    def __init__(self, hidden_sizes=(16,), activation="relu", l2_alpha=1e-4,
                 schedule="constant", learning_rate=1e-2, epochs=200,
                 batch_size=200):
        hidden_sizes = tuple(int(h) for h in np.atleast_1d(hidden_sizes))
        if len(hidden_sizes) < 1 or any(h < 1 for h in hidden_sizes):
            raise ValueError("at least one hidden layer of size >= 1 is required")
        if activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {sorted(ACTIVATIONS)}")
        if schedule not in ("constant", "adaptive"):
            raise ValueError("schedule must be 'constant' or 'adaptive'")
        self.hidden_sizes = hidden_sizes
        self.activation = activation
        self.l2_alpha = l2_alpha
        self.schedule = schedule
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size

    # ------------------------------------------------------------------
    # core math, exposed for the finite-difference gradient check
    # ------------------------------------------------------------------

    def _init_params(self, d, K, rng):
        sizes = (d,) + self.hidden_sizes + (K,)
        params = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            W = rng.uniform(-bound, bound, (fan_in, fan_out))
            b = np.zeros(fan_out)
            params.append((W, b))
        return params

    def loss_and_grad(self, params, X, y):
        """Cross-entropy + L2 loss and its exact gradient for given params."""
        act, dact = ACTIVATIONS[self.activation]
        n = len(X)
        zs, hs = [], [X]
        h = X
        for i, (W, b) in enumerate(params):
            z = h @ W + b
            zs.append(z)
            h = act(z) if i < len(params) - 1 else z
            hs.append(h)
        P = _softmax(hs[-1])
        ce = -np.mean(np.log(np.clip(P[np.arange(n), y], 1e-300, None)))
        l2 = 0.5 * self.l2_alpha * sum(float(np.sum(W * W)) for W, _ in params) / n
        loss = ce + l2
        delta = P.copy()
        delta[np.arange(n), y] -= 1.0
        delta /= n
        grads = [None] * len(params)
        for i in reversed(range(len(params))):
            W, _ = params[i]
            gW = hs[i].T @ delta + self.l2_alpha * W / n
            gb = delta.sum(axis=0)
            grads[i] = (gW, gb)
            if i > 0:
                delta = (delta @ W.T) * dact(zs[i - 1])
        return loss, grads

    # ------------------------------------------------------------------

    def fit(self, ds: Dataset, seed: int = 0):
        self.seed = seed
        rng = np.random.default_rng(seed)
        X, y = ds.X, ds.y
        n = len(y)
        self.n_classes_ = ds.n_classes
        self.n_features_ = ds.n_features
        params = self._init_params(ds.n_features, ds.n_classes, rng)
        m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        lr = self.learning_rate
        step = 0
        batch = min(self.batch_size, n)
        self.loss_curve_ = []
        stalls = 0
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            epoch_loss = 0.0
            n_batches = 0
            for start in range(0, n, batch):
                rows = order[start: start + batch]
                loss, grads = self.loss_and_grad(params, X[rows], y[rows])
                if not np.isfinite(loss):
                    raise TrainingDiverged(
                        f"non-finite loss at epoch {epoch}, batch {n_batches}"
                    )
                epoch_loss += loss
                n_batches += 1
                step += 1
                new_params = []
                for i, (W, b) in enumerate(params):
                    gW, gb = grads[i]
                    mW = beta1 * m[i][0] + (1 - beta1) * gW
                    mb = beta1 * m[i][1] + (1 - beta1) * gb
                    vW = beta2 * v[i][0] + (1 - beta2) * gW * gW
                    vb = beta2 * v[i][1] + (1 - beta2) * gb * gb
                    m[i] = (mW, mb)
                    v[i] = (vW, vb)
                    mWh = mW / (1 - beta1 ** step)
                    mbh = mb / (1 - beta1 ** step)
                    vWh = vW / (1 - beta2 ** step)
                    vbh = vb / (1 - beta2 ** step)
                    new_params.append((
                        W - lr * mWh / (np.sqrt(vWh) + eps),
                        b - lr * mbh / (np.sqrt(vbh) + eps),
                    ))
                params = new_params
            epoch_loss /= max(n_batches, 1)
            if self.schedule == "adaptive" and self.loss_curve_:
                if epoch_loss > min(self.loss_curve_) - 1e-6:
                    stalls += 1
                    if stalls >= 2:
                        lr /= 5.0
                        stalls = 0
                else:
                    stalls = 0
            self.loss_curve_.append(float(epoch_loss))
        self.params_ = params
        return self

    def decision_scores(self, X):
        act, _ = ACTIVATIONS[self.activation]
        h = np.atleast_2d(np.asarray(X, dtype=float))
        for i, (W, b) in enumerate(self.params_):
            z = h @ W + b
            h = act(z) if i < len(self.params_) - 1 else z
        return h

    def predict_proba(self, X):
        return _softmax(self.decision_scores(X))

    def predict(self, X):
        return np.argmax(self.decision_scores(X), axis=1)

    def _state(self):
        meta = {
            "hidden_sizes": list(self.hidden_sizes), "activation": self.activation,
            "l2_alpha": self.l2_alpha, "schedule": self.schedule,
            "learning_rate": self.learning_rate, "epochs": self.epochs,
            "batch_size": self.batch_size, "n_classes": self.n_classes_,
            "n_features": self.n_features_, "seed": self.seed,
        }
        arrays = {"loss_curve": np.asarray(self.loss_curve_)}
        for i, (W, b) in enumerate(self.params_):
            arrays[f"W{i}"] = W
            arrays[f"b{i}"] = b
        return meta, arrays

    @classmethod
    def _from_state(cls, meta, arrays):
        model = cls(tuple(meta["hidden_sizes"]), meta["activation"], meta["l2_alpha"],
                    meta["schedule"], meta["learning_rate"], meta["epochs"],
                    meta["batch_size"])
        model.n_classes_ = meta["n_classes"]
        model.n_features_ = meta["n_features"]
        model.seed = meta["seed"]
        model.loss_curve_ = list(arrays["loss_curve"])
        model.params_ = []
        i = 0
        while f"W{i}" in arrays:
            model.params_.append((arrays[f"W{i}"], arrays[f"b{i}"]))
            i += 1
        return model
