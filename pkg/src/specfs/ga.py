"""Genetic-algorithm search over fixed-length m/z index subsets, and the GA + NN pipeline.

Fitness is minimized:

    w_sep * (1 - mean true-class LDA posterior) + w_err * LDA error rate

with LDA fitted on an inner training part and scored on an inner evaluation
part of the data handed to :func:`evolve`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import classifiers
from ._parallel import pmap
from .classifiers import NnConfig
from .errors import ArgumentError, ConfigError
from .report import PipelineReport, StageClock, config_dict, dataset_digest, selected_list
from .spectra import CANCER, NORMAL, LabeledDataset

WORST_FITNESS = 1.0
INNER_HOLDOUT = 0.2


@dataclass(frozen=True)
class GaConfig:
    population: int = 100
    generations: int = 50
    chromosome_length: int = 20
    crossover_rate: float = 0.8
    mutation_rate: float = 0.02
    tournament_size: int = 3
    elite_count: int = 2
    fitness_weights: tuple = (0.5, 0.5)  # (separability, error rate)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fitness_weights", tuple(float(w) for w in self.fitness_weights))
        if self.population < 2:
            raise ConfigError("population must be >= 2")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        if self.chromosome_length < 1:
            raise ConfigError("chromosome_length must be >= 1")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise ConfigError("crossover_rate and mutation_rate must be in [0, 1]")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be >= 1")
        if not 0 <= self.elite_count <= self.population:
            raise ConfigError("elite_count must be in [0, population]")
        w = self.fitness_weights
        if len(w) != 2 or min(w) < 0 or abs(sum(w) - 1.0) > 1e-9:
            raise ConfigError("fitness_weights must be two non-negative reals summing to 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


def validate_chromosome(genes, n_features: int, length: int) -> None:
    genes = np.asarray(genes)
    if genes.shape != (length,):
        raise ArgumentError(f"chromosome must hold exactly {length} genes, got {genes.shape}")
    if np.unique(genes).size != length:
        raise ArgumentError("chromosome has duplicate genes")
    if genes.min() < 0 or genes.max() >= n_features:
        raise ArgumentError("chromosome gene out of range")
    if np.any(np.diff(genes) <= 0):
        raise ArgumentError("chromosome genes must be sorted")


def fitness(genes, train, eval_, weights=(0.5, 0.5)) -> float:
    """Score a subset; ``train``/``eval_`` are ``(X, y)`` pairs. Lower is better.

    Any LDA failure scores as the worst fitness instead of raising.
    """
    w_sep, w_err = weights
    cols = np.asarray(genes, dtype=np.int64)
    (Xt, yt), (Xe, ye) = train, eval_
    try:
        model = classifiers.lda_fit(Xt[:, cols], yt)
        post = classifiers.lda_posterior(model, Xe[:, cols])
    except (ArgumentError, np.linalg.LinAlgError, ValueError, FloatingPointError):
        return WORST_FITNESS
    if not np.all(np.isfinite(post)):
        return WORST_FITNESS
    ye = np.asarray(ye, dtype=np.int64)
    true_post = post[np.arange(ye.size), ye]
    pred = np.where(post[:, CANCER] > post[:, NORMAL], CANCER, NORMAL)
    err = float(np.mean(pred != ye))
    return float(w_sep * (1.0 - true_post.mean()) + w_err * err)


@dataclass(frozen=True, eq=False)
class GaResult:
    best: np.ndarray
    best_fitness: float
    history: tuple  # ((best, mean), ...) one per generation
    evaluations: int

    def history_dicts(self):
        return [
            {"generation": g + 1, "best_fitness": b, "mean_fitness": m}
            for g, (b, m) in enumerate(self.history)
        ]


class _Evolver:
    def __init__(self, X, y, cfg: GaConfig):
        self.cfg = cfg
        self.p = X.shape[1]
        self.rng = np.random.default_rng(cfg.seed)
        inner = classifiers.holdout_split(y, INNER_HOLDOUT, int(self.rng.integers(2**63)))
        self.train = (X[inner.train_indices], y[inner.train_indices])
        self.eval = (X[inner.test_indices], y[inner.test_indices])
        self.evaluations = 0

    def random_chromosome(self):
        return np.sort(self.rng.choice(self.p, self.cfg.chromosome_length, replace=False))

    def evaluate(self, population):
        self.evaluations += len(population)
        w = self.cfg.fitness_weights
        return np.array(pmap(lambda g: fitness(g, self.train, self.eval, w), population))

    def tournament(self, fit):
        picks = self.rng.integers(0, fit.size, self.cfg.tournament_size)
        return picks[np.argmin(fit[picks])]  # first of the best on ties

    def crossover(self, a, b):
        union = np.union1d(a, b)
        L = self.cfg.chromosome_length
        if union.size >= L:
            return np.sort(self.rng.choice(union, L, replace=False))
        rest = np.setdiff1d(np.arange(self.p), union)
        fill = self.rng.choice(rest, L - union.size, replace=False)
        return np.sort(np.concatenate([union, fill]))

    def mutate(self, genes):
        genes = genes.copy()
        hits = np.flatnonzero(self.rng.random(genes.size) < self.cfg.mutation_rate)
        for i in hits:
            used = np.zeros(self.p, dtype=bool)
            used[genes] = True
            free = np.flatnonzero(~used)
            if free.size:
                genes[i] = free[self.rng.integers(free.size)]
        return np.sort(genes)

    def next_generation(self, population, fit):
        cfg = self.cfg
        ranked = np.argsort(fit, kind="stable")
        children = [population[i].copy() for i in ranked[: cfg.elite_count]]
        while len(children) < cfg.population:
            a = population[self.tournament(fit)]
            b = population[self.tournament(fit)]
            child = self.crossover(a, b) if self.rng.random() < cfg.crossover_rate else a.copy()
            children.append(self.mutate(child))
        return children


def evolve(X, y, cfg: GaConfig = GaConfig(),
           on_generation: Callable | None = None) -> GaResult:
    """Run exactly ``cfg.generations`` generations on the given (training) data.

    ``on_generation(generation, population, fitness)`` is called for the
    initial population (generation 0) and after every generation.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ArgumentError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if X.shape[1] < cfg.chromosome_length:
        raise ArgumentError(
            f"{X.shape[1]} features cannot fill chromosomes of length {cfg.chromosome_length}"
        )
    ev = _Evolver(X, y, cfg)
    population = [ev.random_chromosome() for _ in range(cfg.population)]
    fit = ev.evaluate(population)
    if on_generation is not None:
        on_generation(0, population, fit)

    history = []
    for gen in range(1, cfg.generations + 1):
        population = ev.next_generation(population, fit)
        fit = ev.evaluate(population)
        history.append((float(fit.min()), float(fit.mean())))
        if on_generation is not None:
            on_generation(gen, population, fit)

    best = int(np.argmin(fit))
    return GaResult(population[best].copy(), float(fit[best]), tuple(history), ev.evaluations)


@dataclass(frozen=True)
class Pipeline2Config:
    holdout: float = 0.2
    seed: int = 0
    ga: GaConfig = field(default_factory=GaConfig)
    nn: NnConfig = field(default_factory=NnConfig)

    def __post_init__(self):
        if not 0 < self.holdout < 1:
            raise ConfigError("holdout must be in (0, 1)")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


def run_pipeline2(ds: LabeledDataset, cfg: Pipeline2Config = Pipeline2Config()) -> PipelineReport:
    """split -> evolve on train -> NN on the best chromosome -> held-out accuracy."""
    clock = StageClock()
    split_seed, ga_seed, nn_seed = np.random.SeedSequence(cfg.seed).generate_state(3)

    with clock.stage("split"):
        split = classifiers.holdout_split(ds.y, cfg.holdout, int(split_seed))
        train, test = ds.subset(split.train_indices), ds.subset(split.test_indices)

    with clock.stage("ga"):
        result = evolve(train.X, train.y, replace(cfg.ga, seed=int(ga_seed)))

    with clock.stage("nn"):
        nn_cfg = cfg.nn if cfg.nn.seed is not None else replace(cfg.nn, seed=int(nn_seed))
        cols = result.best
        net = classifiers.nn_train(train.X[:, cols], train.y, nn_cfg)
        pred, _ = classifiers.nn_predict(net, test.X[:, cols])
        acc = classifiers.accuracy(pred, test.y)

    mask = np.zeros(ds.n_features, dtype=bool)
    mask[cols] = True
    return PipelineReport(
        pipeline=2,
        config=config_dict(cfg),
        seed=cfg.seed,
        dataset=dataset_digest(ds, split),
        selected_features=selected_list(cols, ds.grid),
        test_accuracy=acc.accuracy,
        confusion=acc.confusion,
        model={"nn": net.to_dict()},
        ga={
            "best_fitness": result.best_fitness,
            "evaluations": result.evaluations,
            "history": result.history_dicts(),
        },
        timings=clock.timings,
        artifacts={"pattern": (ds.grid, train.X.mean(axis=0), mask)},
    )
