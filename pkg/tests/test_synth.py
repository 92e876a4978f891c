import numpy as np
import pytest

from specfs.classifiers import accuracy, holdout_split, lda_fit, lda_predict
from specfs.errors import ConfigError
from specfs.ranking import t_test_scores
from specfs.spectra import CANCER, NORMAL
from specfs.synth import Baseline, SynthConfig, _midranks, generate, oracle_auc


def test_noise_free_means_differ_only_near_planted_site():
    cfg = SynthConfig(planted=((700, 1.0),), noise_std=0.0, abundance_jitter=0.0,
                      baseline="none", seed=2)
    ds, planted = generate(cfg)
    assert planted.tolist() == [700]
    diff = ds.X[ds.y == CANCER].mean(axis=0) - ds.X[ds.y == NORMAL].mean(axis=0)
    changed = np.flatnonzero(np.abs(diff) > 1e-12)
    assert changed.size > 0
    assert np.all(np.abs(changed - 700) <= 3 * cfg.peak_width)


def test_same_seed_same_bytes():
    a, pa = generate(SynthConfig(seed=17, baseline="sinusoidal"))
    b, pb = generate(SynthConfig(seed=17, baseline="sinusoidal"))
    assert a.X.tobytes() == b.X.tobytes()
    assert a.grid.tobytes() == b.grid.tobytes()
    np.testing.assert_array_equal(pa, pb)
    c, _ = generate(SynthConfig(seed=18, baseline="sinusoidal"))
    assert a.X.tobytes() != c.X.tobytes()


def test_default_shape_and_labels():
    ds, planted = generate(SynthConfig(seed=0))
    assert ds.X.shape == (216, 2000)
    assert ds.class_counts() == {"cancer": 121, "normal": 95}
    assert planted.size == 20 and np.unique(planted).size == 20
    assert len(set(ds.ids)) == 216


def test_ttest_ranks_a_planted_index_first():
    hits = 0
    for seed in range(20):
        ds, planted = generate(SynthConfig(seed=seed))
        hits += int(t_test_scores(ds).order[0] in set(planted.tolist()))
    assert hits >= 19


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("noise", [0.0, 1.0 / 8])
def test_lda_on_planted_set_is_perfect(seed, noise):
    ds, planted = generate(SynthConfig(seed=seed, noise_std=noise))
    split = holdout_split(ds.y, 0.2, seed)
    tr, te = split.train_indices, split.test_indices
    model = lda_fit(ds.X[tr][:, planted], ds.y[tr])
    pred, _ = lda_predict(model, ds.X[te][:, planted])
    assert accuracy(pred, ds.y[te]).accuracy == 1.0


@pytest.mark.parametrize("baseline", list(Baseline))
def test_baselines_produce_valid_datasets(baseline):
    ds, _ = generate(SynthConfig(n_cancer=5, n_normal=5, grid_points=300, n_planted=3,
                                 baseline=baseline, seed=1))
    assert np.all(np.isfinite(ds.X))
    assert ds.n_samples == 10


@pytest.mark.parametrize("kwargs", [
    {"planted": ((5, 1.0), (5, 2.0))},
    {"planted": ((2000, 1.0),)},
    {"planted": ((5, 0.0),)},
    {"amplitude": -1.0},
    {"noise_std": -0.1},
    {"peak_width": 0.0},
    {"grid_points": 1},
    {"n_cancer": -1},
    {"n_planted": 400},
    {"baseline": "quadratic"},
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        SynthConfig(**kwargs)


def test_oracle_auc_perfect_separation():
    assert oracle_auc([5.0, 6.0, 7.0], [1.0, 2.0]) == 1.0
    assert oracle_auc([1.0, 2.0], [5.0, 6.0, 7.0]) == 0.0
    assert oracle_auc([1.0], [1.0]) == 0.5


def test_midranks_by_hand():
    assert _midranks([10.0, 20.0, 20.0, 5.0]) == [2.0, 3.5, 3.5, 1.0]
    assert _midranks([1.0, 1.0, 1.0, 1.0]) == [2.5] * 4
