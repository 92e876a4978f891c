import numpy as np
import pytest

from specfs.spectra import CANCER, NORMAL, LabeledDataset
from specfs.synth import SynthConfig, generate


def make_dataset(X, y, grid=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if grid is None:
        grid = np.arange(1, X.shape[1] + 1, dtype=float)
    return LabeledDataset(grid, X, np.asarray(y))


def two_groups(cancer, normal):
    """One-feature dataset from two value lists."""
    values = list(cancer) + list(normal)
    labels = [CANCER] * len(cancer) + [NORMAL] * len(normal)
    return make_dataset(np.array(values, dtype=float)[:, None], labels)


@pytest.fixture(scope="session")
def planted():
    """Default planted synthetic dataset (216 x 2000) and its planted indices."""
    return generate(SynthConfig(seed=3))


@pytest.fixture(scope="session")
def small_planted():
    return generate(SynthConfig(n_cancer=30, n_normal=24, grid_points=400, n_planted=5, seed=11))



def source_rows(M, X_full):
    """For each row of ``M`` the index of the ``X_full`` row it was sliced from.

    ``M`` may hold any column subset. Rows are matched by value membership,
    which is unambiguous on noisy data where every entry is distinct. Rows
    with no source get -1.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    out = []
    for row in M:
        hits = [i for i in range(X_full.shape[0]) if np.isin(row, X_full[i]).all()]
        out.append(hits[0] if len(hits) == 1 else -1)
    return np.array(out)
