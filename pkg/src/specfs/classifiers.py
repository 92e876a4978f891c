"""Holdout splitting, two-class LDA, a one-hidden-layer network, and accuracy."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ConfigError, TrainingDivergenceError
from .spectra import CANCER, NORMAL


# --------------------------------------------------------------------------- split


@dataclass(frozen=True, eq=False)
class Split:
    train_indices: np.ndarray
    test_indices: np.ndarray
    holdout_fraction: float
    seed: int

    def __eq__(self, other):
        return (
            isinstance(other, Split)
            and np.array_equal(self.train_indices, other.train_indices)
            and np.array_equal(self.test_indices, other.test_indices)
            and self.holdout_fraction == other.holdout_fraction
            and self.seed == other.seed
        )


def holdout_split(y, fraction: float, seed: int) -> Split:
    """Stratified holdout: each class sends floor(count * fraction) samples to test."""
    y = np.asarray(getattr(y, "y", y))
    if not 0 < fraction < 1:
        raise ArgumentError(f"holdout fraction {fraction} must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for label in (NORMAL, CANCER):
        members = np.flatnonzero(y == label)
        if members.size < 2:
            raise ArgumentError(f"class {label} has {members.size} samples; holdout needs >= 2")
        n_test = int(np.floor(members.size * fraction))
        perm = rng.permutation(members)
        test.append(perm[:n_test])
        train.append(perm[n_test:])
    train_idx, test_idx = np.sort(np.concatenate(train)), np.sort(np.concatenate(test))
    if train_idx.size == 0 or test_idx.size == 0:
        raise ArgumentError(f"fraction {fraction} leaves an empty train or test set")
    return Split(train_idx, test_idx, float(fraction), int(seed))


# --------------------------------------------------------------------------- metrics


@dataclass(frozen=True)
class Accuracy:
    accuracy: float
    confusion: list  # rows = truth (normal, cancer), columns = prediction

    def to_dict(self):
        return {"accuracy": self.accuracy, "confusion": self.confusion}


def accuracy(pred, truth) -> Accuracy:
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ArgumentError(f"prediction/truth length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ArgumentError("accuracy of an empty prediction set is undefined")
    conf = np.zeros((2, 2), dtype=np.int64)
    np.add.at(conf, (truth, pred), 1)
    return Accuracy(float(np.trace(conf)) / pred.size, conf.tolist())


# --------------------------------------------------------------------------- LDA


def _as_xy(X, y):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ArgumentError(f"shape mismatch: X {X.shape}, y {y.shape}")
    return X, y


@dataclass(frozen=True, eq=False)
class LdaModel:
    means: np.ndarray  # (2, d): row 0 normal, row 1 cancer
    pooled_cov_inverse: np.ndarray
    priors: np.ndarray  # (2,)

    def discriminants(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] != self.means.shape[1]:
            raise ArgumentError(f"expected {self.means.shape[1]} features, got {X.shape[1]}")
        w = self.means @ self.pooled_cov_inverse  # (2, d)
        const = -0.5 * np.einsum("kd,kd->k", w, self.means) + np.log(self.priors)
        return X @ w.T + const

    def to_dict(self):
        return {
            "means": self.means.tolist(),
            "pooled_cov_inverse": self.pooled_cov_inverse.tolist(),
            "priors": self.priors.tolist(),
        }


def lda_fit(X, y) -> LdaModel:
    X, y = _as_xy(X, y)
    n, d = X.shape
    groups = [X[y == NORMAL], X[y == CANCER]]
    if any(g.shape[0] == 0 for g in groups):
        raise ArgumentError("LDA needs samples from both classes")
    means = np.vstack([g.mean(axis=0) for g in groups])
    scatter = sum((g - m).T @ (g - m) for g, m in zip(groups, means))
    cov = scatter / max(n - 2, 1)
    trace = float(np.trace(cov))
    ridge = 1e-6 * trace / d if trace > 0 else 1e-6
    inv = np.linalg.inv(cov + ridge * np.eye(d))
    inv = 0.5 * (inv + inv.T)
    priors = np.array([groups[0].shape[0], groups[1].shape[0]], dtype=float) / n
    return LdaModel(means, inv, priors)


def lda_predict(model: LdaModel, X):
    """Labels and per-sample cancer-minus-normal discriminant; exact ties go to NORMAL."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != model.means.shape[1]:
        raise ArgumentError(f"expected {model.means.shape[1]} features, got {X.shape[1]}")
    # same quantity as delta_cancer - delta_normal, written around the class midpoint
    # so a point equidistant from both means scores exactly zero under equal priors
    w = model.pooled_cov_inverse @ (model.means[1] - model.means[0])
    mid = 0.5 * (model.means[0] + model.means[1])
    score = (X - mid) @ w + np.log(model.priors[1] / model.priors[0])
    return np.where(score > 0, CANCER, NORMAL), score


def lda_posterior(model: LdaModel, X) -> np.ndarray:
    """Class posteriors, columns (normal, cancer), from the softmax of the discriminants."""
    delta = model.discriminants(X)
    delta = delta - delta.max(axis=1, keepdims=True)
    e = np.exp(delta)
    return e / e.sum(axis=1, keepdims=True)


# --------------------------------------------------------------------------- neural network


@dataclass(frozen=True)
class NnConfig:
    hidden: int = 16
    epochs: int = 300
    rate: float = 0.5
    seed: int | None = None

    def __post_init__(self):
        if self.hidden < 1:
            raise ConfigError("hidden must be >= 1")
        if self.epochs < 0:
            raise ConfigError("epochs must be >= 0")
        if not self.rate > 0:
            raise ConfigError("rate must be positive")


@dataclass(eq=False)
class NnModel:
    """d -> h -> 1 network, logistic activations, inputs standardized with stored stats."""

    w1: np.ndarray  # (d, h)
    b1: np.ndarray  # (h,)
    w2: np.ndarray  # (h,)
    b2: float
    x_mean: np.ndarray = field(default=None)
    x_scale: np.ndarray = field(default=None)

    def __post_init__(self):
        d = self.w1.shape[0]
        if self.x_mean is None:
            self.x_mean = np.zeros(d)
        if self.x_scale is None:
            self.x_scale = np.ones(d)

    @property
    def layer_sizes(self):
        return [self.w1.shape[0], self.w1.shape[1], 1]

    def to_dict(self):
        return {
            "layer_sizes": self.layer_sizes,
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": float(self.b2),
            "x_mean": self.x_mean.tolist(),
            "x_scale": self.x_scale.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.asarray(d["w1"], dtype=float).reshape(d["layer_sizes"][0], d["layer_sizes"][1]),
            np.asarray(d["b1"], dtype=float),
            np.asarray(d["w2"], dtype=float),
            float(d["b2"]),
            np.asarray(d["x_mean"], dtype=float),
            np.asarray(d["x_scale"], dtype=float),
        )


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _forward(m: NnModel, Z):
    H = _sigmoid(Z @ m.w1 + m.b1)
    logit = H @ m.w2 + m.b2
    return H, logit


def loss_and_gradients(m: NnModel, Z, y):
    """Mean cross-entropy on already-standardized inputs ``Z`` and its gradients.

    Returns ``(loss, {"w1", "b1", "w2", "b2"})``.
    """
    y = np.asarray(y, dtype=float)
    n = Z.shape[0]
    H, logit = _forward(m, Z)
    loss = float(np.mean(np.logaddexp(0.0, logit) - y * logit))
    d_logit = (_sigmoid(logit) - y) / n
    d_pre = np.outer(d_logit, m.w2) * H * (1.0 - H)
    grads = {
        "w1": Z.T @ d_pre,
        "b1": d_pre.sum(axis=0),
        "w2": H.T @ d_logit,
        "b2": float(d_logit.sum()),
    }
    return loss, grads


def nn_train(X, y, cfg: NnConfig = NnConfig()) -> NnModel:
    X, y = _as_xy(X, y)
    if not (np.any(y == CANCER) and np.any(y == NORMAL)):
        raise ArgumentError("network training needs samples from both classes")
    d, h = X.shape[1], cfg.hidden
    x_mean = X.mean(axis=0)
    x_scale = X.std(axis=0)
    x_scale[x_scale == 0] = 1.0
    Z = (X - x_mean) / x_scale

    rng = np.random.default_rng(cfg.seed)
    lim1, lim2 = 1.0 / np.sqrt(d), 1.0 / np.sqrt(h)
    m = NnModel(
        w1=rng.uniform(-lim1, lim1, (d, h)),
        b1=rng.uniform(-lim1, lim1, h),
        w2=rng.uniform(-lim2, lim2, h),
        b2=float(rng.uniform(-lim2, lim2)),
        x_mean=x_mean,
        x_scale=x_scale,
    )
    # overflow is detected through the loss check, so numpy's warnings add nothing
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(cfg.epochs):
            loss, g = loss_and_gradients(m, Z, y)
            if not np.isfinite(loss):
                raise TrainingDivergenceError(epoch)
            m.w1 -= cfg.rate * g["w1"]
            m.b1 -= cfg.rate * g["b1"]
            m.w2 -= cfg.rate * g["w2"]
            m.b2 -= cfg.rate * g["b2"]
    if not all(np.all(np.isfinite(a)) for a in (m.w1, m.b1, m.w2, m.b2)):
        raise TrainingDivergenceError(cfg.epochs, "non-finite weights")
    return m


def nn_predict(m: NnModel, X):
    """Labels (probability >= 0.5 -> CANCER) and cancer probabilities."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != m.w1.shape[0]:
        raise ArgumentError(f"expected {m.w1.shape[0]} features, got {X.shape[1]}")
    _, logit = _forward(m, (X - m.x_mean) / m.x_scale)
    prob = _sigmoid(logit)
    return np.where(prob >= 0.5, CANCER, NORMAL), prob
