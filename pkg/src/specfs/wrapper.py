"""Wrapper sweep (LDA accuracy vs. feature count) and the ranking + PCA pipeline."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import classifiers, pca, ranking
from ._parallel import pmap
from .classifiers import NnConfig
from .errors import ArgumentError, ConfigError
from .ranking import RankMethod
from .report import PipelineReport, StageClock, config_dict, dataset_digest, selected_list
from .spectra import LabeledDataset


class FeatureSpace(str, enum.Enum):
    RANKED = "ranked_features"
    PCA = "pca_components"


@dataclass(frozen=True)
class AccuracyCurve:
    points: tuple  # ((k, accuracy), ...)
    best_k: int
    method: str | None = None
    space: FeatureSpace = FeatureSpace.RANKED

    @property
    def best_accuracy(self) -> float:
        return max(a for _, a in self.points)

    def to_dict(self):
        return {
            "points": [[k, a] for k, a in self.points],
            "best_k": self.best_k,
            "best_accuracy": self.best_accuracy,
            "method": self.method,
            "space": FeatureSpace(self.space).value,
        }


def sweep(X_train, y_train, X_test, y_test, order, k_max: int, step: int = 1,
          method=None, space=FeatureSpace.RANKED) -> AccuracyCurve:
    """LDA test accuracy on the first k columns of ``order`` for k = step, 2*step, ..., k_max.

    ``best_k`` is the smallest k reaching the maximum accuracy.
    """
    X_train = np.asarray(X_train, dtype=float)
    X_test = np.asarray(X_test, dtype=float)
    order = np.asarray(order, dtype=np.int64)
    p = X_train.shape[1]
    if step < 1:
        raise ArgumentError("step must be >= 1")
    if k_max < step:
        raise ArgumentError(f"k_max={k_max} is smaller than step={step}")
    if k_max > p or k_max > order.size:
        raise ArgumentError(f"k_max={k_max} exceeds the feature count {min(p, order.size)}")
    head = order[:k_max]
    if np.unique(head).size != head.size or head.min() < 0 or head.max() >= p:
        raise ArgumentError("order must be a permutation of feature indices")

    def evaluate(k):
        cols = head[:k]
        try:
            model = classifiers.lda_fit(X_train[:, cols], y_train)
            pred, _ = classifiers.lda_predict(model, X_test[:, cols])
        except (ArgumentError, np.linalg.LinAlgError) as exc:
            raise ArgumentError(f"LDA failed at k={k}: {exc}") from exc
        return classifiers.accuracy(pred, y_test).accuracy

    ks = list(range(step, k_max + 1, step))
    accs = pmap(evaluate, ks)
    best = max(accs)
    best_k = next(k for k, a in zip(ks, accs) if a == best)
    return AccuracyCurve(tuple(zip(ks, accs)), best_k,
                         None if method is None else RankMethod.parse(method).value, space)


@dataclass(frozen=True)
class Pipeline1Config:
    method: RankMethod = RankMethod.TTEST
    holdout: float = 0.2
    seed: int = 0
    rank_top: int = 2000
    pca_k: int | None = None  # None -> min(n_train - 1, 150)
    k_max: int | None = None  # None -> pca_k
    step: int = 1
    nn: NnConfig = field(default_factory=NnConfig)

    def __post_init__(self):
        try:
            object.__setattr__(self, "method", RankMethod.parse(self.method))
        except ArgumentError as exc:
            raise ConfigError(str(exc)) from None
        if not 0 < self.holdout < 1:
            raise ConfigError("holdout must be in (0, 1)")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.rank_top < 1:
            raise ConfigError("rank_top must be >= 1")
        if self.pca_k is not None and self.pca_k < 1:
            raise ConfigError("pca_k must be >= 1")
        if self.k_max is not None and self.k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if self.step < 1:
            raise ConfigError("step must be >= 1")


def run_pipeline1(ds: LabeledDataset, cfg: Pipeline1Config = Pipeline1Config()) -> PipelineReport:
    """split -> rank (train) -> top-R -> PCA (train) -> LDA sweep -> NN on best_k components."""
    clock = StageClock()
    split_seed, nn_seed = np.random.SeedSequence(cfg.seed).generate_state(2)

    with clock.stage("split"):
        split = classifiers.holdout_split(ds.y, cfg.holdout, int(split_seed))
        train, test = ds.subset(split.train_indices), ds.subset(split.test_indices)

    with clock.stage("rank"):
        ranked = ranking.rank(train, cfg.method)
        top = ranked.top(min(cfg.rank_top, ds.n_features))

    with clock.stage("pca"):
        k = cfg.pca_k if cfg.pca_k is not None else pca.default_k(train.n_samples, top.size)
        model = pca.fit_pca(train.X[:, top], k)
        Z_train = pca.project(model, train.X[:, top])
        Z_test = pca.project(model, test.X[:, top])

    with clock.stage("sweep"):
        k_max = cfg.k_max if cfg.k_max is not None else k
        if k_max > k:
            raise ArgumentError(f"k_max={k_max} exceeds the number of PCA components {k}")
        curve = sweep(Z_train, train.y, Z_test, test.y, np.arange(k), k_max, cfg.step,
                      method=cfg.method, space=FeatureSpace.PCA)

    with clock.stage("nn"):
        nn_cfg = cfg.nn if cfg.nn.seed is not None else replace(cfg.nn, seed=int(nn_seed))
        cols = np.arange(curve.best_k)
        net = classifiers.nn_train(Z_train[:, cols], train.y, nn_cfg)
        pred, _ = classifiers.nn_predict(net, Z_test[:, cols])
        acc = classifiers.accuracy(pred, test.y)

    return PipelineReport(
        pipeline=1,
        config=config_dict(cfg),
        seed=cfg.seed,
        dataset=dataset_digest(ds, split),
        selected_features=selected_list(top, ds.grid),
        test_accuracy=acc.accuracy,
        confusion=acc.confusion,
        model={"nn": net.to_dict(), "pca_components": k, "nn_inputs": int(curve.best_k)},
        ranking_method=cfg.method.value,
        curve=curve.to_dict(),
        timings=clock.timings,
        artifacts={"pca_model": model},
    )
