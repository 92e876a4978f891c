"""Principal component analysis for wide (n << p) spectral matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

DEFAULT_MAX_COMPONENTS = 150
# eigenvalues below this fraction of the largest are treated as exact zeros
NULL_EIGENVALUE = 1e-12


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray  # (p,)
    components: np.ndarray  # (k, p), orthonormal rows
    eigenvalues: np.ndarray  # (k,), descending

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    def to_dict(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "components": self.components.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PcaModel":
        return cls(
            np.asarray(d["mean"], dtype=float),
            np.asarray(d["components"], dtype=float).reshape(len(d["eigenvalues"]), -1),
            np.asarray(d["eigenvalues"], dtype=float),
        )


def default_k(n_samples: int, n_features: int) -> int:
    return max(1, min(n_samples - 1, n_features, DEFAULT_MAX_COMPONENTS))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of every row made positive
    pivots = np.abs(vectors).argmax(axis=1)
    signs = np.sign(vectors[np.arange(vectors.shape[0]), pivots])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def fit_pca(X, k: int) -> PcaModel:
    """Top-``k`` eigenpairs of the sample covariance (n-1 denominator).

    When there are fewer samples than features the n x n Gram matrix is
    decomposed and its eigenvectors mapped into feature space.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ArgumentError("X must be a samples x features matrix")
    n, p = X.shape
    if n < 2:
        raise ArgumentError("PCA needs at least 2 samples")
    if not np.all(np.isfinite(X)):
        raise ArgumentError("PCA input contains non-finite values")
    if not 1 <= k <= min(n - 1, p):
        raise ArgumentError(f"k={k} must be in [1, {min(n - 1, p)}]")

    mean = X.mean(axis=0)
    Xc = X - mean
    if n < p:
        gram = Xc @ Xc.T / (n - 1)
        vals, vecs = np.linalg.eigh(gram)
        vals, vecs = vals[::-1][:k], vecs[:, ::-1][:, :k]
        vals = np.where(vals < 0, 0.0, vals)
        good = vals > NULL_EIGENVALUE * max(vals[0], 1e-300)
        comps = (Xc.T @ vecs[:, good]) / np.sqrt(vals[good] * (n - 1))
        if not good.all():
            # null directions: complete the basis with seeded random vectors
            filler = np.random.default_rng(0).standard_normal((p, int((~good).sum())))
            comps = np.hstack([comps, filler])
        # Householder pass; R's diagonal signs are folded back so directions are kept
        q, r = np.linalg.qr(comps)
        comps = q * np.where(np.diag(r) < 0, -1.0, 1.0)
        components = comps.T
    else:
        cov = Xc.T @ Xc / (n - 1)
        vals, vecs = np.linalg.eigh(cov)
        vals, vecs = vals[::-1][:k], vecs[:, ::-1][:, :k]
        vals = np.where(vals < 0, 0.0, vals)
        components = vecs.T
    return PcaModel(mean, _fix_signs(np.ascontiguousarray(components)), np.ascontiguousarray(vals))


def project(model: PcaModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.mean.size:
        raise ArgumentError(
            f"expected {model.mean.size} features, got shape {X.shape}"
        )
    return (X - model.mean) @ model.components.T
