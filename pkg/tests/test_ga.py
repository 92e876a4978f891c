from dataclasses import replace

import numpy as np
import pytest

from conftest import source_rows
from specfs import ga
from specfs.classifiers import NnConfig, holdout_split
from specfs.errors import ArgumentError, ConfigError, StageError
from specfs.ga import (
    WORST_FITNESS,
    GaConfig,
    Pipeline2Config,
    _Evolver,
    evolve,
    fitness,
    run_pipeline2,
    validate_chromosome,
)
from specfs.spectra import CANCER, NORMAL

SMALL = GaConfig(population=12, generations=6, chromosome_length=5, seed=3)


def separable(n=40, p=8, gap=20.0, seed=0):
    rng = np.random.default_rng(seed)
    y = np.array([NORMAL, CANCER] * (n // 2))
    X = rng.standard_normal((n, p))
    X[:, 0] += gap * y
    return X, y


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"population": 1},
        {"generations": 0},
        {"chromosome_length": 0},
        {"crossover_rate": 1.5},
        {"mutation_rate": -0.1},
        {"tournament_size": 0},
        {"elite_count": 101},
        {"fitness_weights": (0.7, 0.7)},
        {"fitness_weights": (-0.5, 1.5)},
        {"seed": -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            GaConfig(**kwargs)

    def test_defaults(self):
        cfg = GaConfig()
        assert (cfg.population, cfg.generations, cfg.chromosome_length) == (100, 50, 20)
        assert cfg.fitness_weights == (0.5, 0.5)


def test_validate_chromosome():
    validate_chromosome(np.array([0, 3, 7]), 8, 3)
    for bad in ([0, 3], [0, 3, 3], [0, 3, 8], [3, 0, 7]):
        with pytest.raises(ArgumentError):
            validate_chromosome(np.array(bad), 8, 3)


class TestFitness:
    def test_large_margin_is_near_zero(self):
        X, y = separable()
        f = fitness([0, 1], (X[:30], y[:30]), (X[30:], y[30:]))
        assert f < 0.05
        assert fitness([0, 1], (X[:30], y[:30]), (X[30:], y[30:]), (0.0, 1.0)) == 0.0

    def test_permuted_labels_error_near_half(self):
        rng = np.random.default_rng(0)
        X, y = separable(n=60, gap=3.0)
        errs = []
        for _ in range(100):
            yp = rng.permutation(y)
            errs.append(fitness([0, 1, 2], (X[:40], yp[:40]), (X[40:], yp[40:]), (0.0, 1.0)))
        assert abs(np.mean(errs) - 0.5) <= 0.1

    def test_single_class_training_is_worst(self):
        X, y = separable()
        assert fitness([0], (X[:10], np.full(10, CANCER)), (X[10:], y[10:])) == WORST_FITNESS

    def test_range(self):
        X, y = separable(gap=0.5)
        f = fitness([1, 2, 3], (X[:30], y[:30]), (X[30:], y[30:]))
        assert 0.0 <= f <= 1.0


class TestEvolve:
    def test_two_elites_keep_best_initial(self):
        X, y = separable(p=10)
        cfg = GaConfig(population=2, generations=1, elite_count=2, chromosome_length=3, seed=5)
        initial = []
        result = evolve(X, y, cfg, on_generation=lambda g, pop, fit: initial.append((pop, fit)) if g == 0 else None)
        pop0, fit0 = initial[0]
        best0 = int(np.argmin(fit0))
        np.testing.assert_array_equal(result.best, pop0[best0])
        assert result.best_fitness == fit0[best0]

    def test_planted_set_is_optimal_and_found(self, planted):
        ds, truth = planted
        cfg = GaConfig(seed=1)
        ev = _Evolver(ds.X, ds.y, cfg)
        assert fitness(truth, ev.train, ev.eval, (0.0, 1.0)) == 0.0
        result = evolve(ds.X, ds.y, cfg)
        assert fitness(result.best, ev.train, ev.eval, (0.0, 1.0)) == 0.0
        assert result.best_fitness < 0.5 / ev.eval[1].size  # error term must be 0

    def test_bookkeeping(self, small_planted):
        ds, _ = small_planted
        cfg = replace(SMALL, generations=8)
        best_seen = []

        def hook(gen, population, fit):
            assert len(population) == cfg.population
            for genes in population:
                validate_chromosome(genes, ds.n_features, cfg.chromosome_length)
            best_seen.append(fit.min())

        result = evolve(ds.X, ds.y, cfg, on_generation=hook)
        assert len(best_seen) == cfg.generations + 1
        assert len(result.history) == cfg.generations
        bests = [b for b, _ in result.history]
        assert all(b2 <= b1 for b1, b2 in zip(bests, bests[1:]))
        assert result.best_fitness == min(bests)
        assert result.evaluations == cfg.population * (cfg.generations + 1)

    def test_gene_pool_frozen_without_variation(self, small_planted):
        ds, _ = small_planted
        cfg = replace(SMALL, crossover_rate=0.0, mutation_rate=0.0)
        pools = []
        evolve(ds.X, ds.y, cfg, on_generation=lambda g, pop, fit: pools.append(set(np.concatenate(pop))))
        assert all(b <= a for a, b in zip(pools, pools[1:]))

    def test_deterministic(self, small_planted):
        ds, _ = small_planted
        a, b = evolve(ds.X, ds.y, SMALL), evolve(ds.X, ds.y, SMALL)
        np.testing.assert_array_equal(a.best, b.best)
        assert a.history == b.history

    def test_parallel_matches_sequential(self, small_planted, monkeypatch):
        ds, _ = small_planted
        monkeypatch.setenv("SPECFS_THREADS", "1")
        seq = evolve(ds.X, ds.y, SMALL)
        monkeypatch.setenv("SPECFS_THREADS", "4")
        par = evolve(ds.X, ds.y, SMALL)
        np.testing.assert_array_equal(seq.best, par.best)
        assert seq.history == par.history

    def test_too_few_features(self):
        X, y = separable(p=4)
        with pytest.raises(ArgumentError):
            evolve(X, y, replace(SMALL, chromosome_length=5))


class TestPipeline2:
    def test_planted_full_accuracy(self, planted):
        ds, _ = planted
        report = run_pipeline2(ds, Pipeline2Config(seed=0))
        assert report.test_accuracy == 1.0
        assert len(report.selected_features) == 20
        assert report.ga["evaluations"] == 100 * 51
        assert len(report.ga["history"]) == 50

    def test_zero_generations(self):
        with pytest.raises(ConfigError):
            Pipeline2Config(ga=GaConfig(generations=0))

    def test_deterministic(self, small_planted):
        ds, _ = small_planted
        cfg = Pipeline2Config(seed=6, ga=SMALL, nn=NnConfig(epochs=50))
        assert run_pipeline2(ds, cfg).to_json() == run_pipeline2(ds, cfg).to_json()

    def test_stage_error(self, small_planted):
        ds, _ = small_planted
        cfg = Pipeline2Config(ga=replace(SMALL, chromosome_length=ds.n_features + 1))
        with pytest.raises(StageError, match="ga"):
            run_pipeline2(ds, cfg)

    def test_evolve_sees_training_rows_only(self, small_planted, monkeypatch):
        ds, _ = small_planted
        cfg = Pipeline2Config(seed=8, ga=SMALL, nn=NnConfig(epochs=20))
        calls = []
        real = ga.evolve

        def spy(X, y, c, on_generation=None):
            calls.append(source_rows(X, ds.X))
            return real(X, y, c, on_generation)

        monkeypatch.setattr(ga, "evolve", spy)
        report = run_pipeline2(ds, cfg)
        split_seed = int(np.random.SeedSequence(cfg.seed).generate_state(3)[0])
        split = holdout_split(ds.y, cfg.holdout, split_seed)
        assert len(calls) == 1
        assert np.all(calls[0] >= 0)
        assert set(calls[0]) == set(split.train_indices)
        assert report.dataset["n_train"] == split.train_indices.size
