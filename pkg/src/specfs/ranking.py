"""Per-feature filter scores: t-test, relative entropy, ROC AUC and Wilcoxon.

Every score is folded to a non-negative discriminability, so larger always
means "more useful". Group values are sorted per feature before any
reduction, which makes the scores bit-identical under sample reordering.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import ArgumentError
from .spectra import CANCER, NORMAL, LabeledDataset

VARIANCE_FLOOR = 1e-12


class RankMethod(str, enum.Enum):
    TTEST = "ttest"
    ENTROPY = "entropy"
    ROC = "roc"
    WILCOXON = "wilcoxon"

    @classmethod
    def parse(cls, value) -> "RankMethod":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = "|".join(m.value for m in cls)
            raise ArgumentError(f"unknown ranking method {value!r} (expected {names})") from None


@dataclass(frozen=True, eq=False)
class RankedFeatures:
    method: RankMethod
    scores: np.ndarray
    order: np.ndarray

    def top(self, k: int) -> np.ndarray:
        return self.order[:k]


def descending_order(scores) -> np.ndarray:
    """Indices sorted by descending score, ties broken by ascending index."""
    return np.argsort(-np.asarray(scores), kind="stable")


def _groups(ds: LabeledDataset, min_size: int):
    a = np.sort(ds.X[ds.y == CANCER], axis=0)
    c = np.sort(ds.X[ds.y == NORMAL], axis=0)
    if a.shape[0] < min_size or c.shape[0] < min_size:
        raise ArgumentError(
            f"each group needs >= {min_size} samples (cancer={a.shape[0]}, normal={c.shape[0]})"
        )
    return a, c


def _ranked(method, scores) -> RankedFeatures:
    scores = np.asarray(scores, dtype=float)
    return RankedFeatures(method, scores, descending_order(scores))


def t_test_scores(ds: LabeledDataset) -> RankedFeatures:
    """|t| with unequal-variance denominator sqrt(v_a/n_a + v_c/n_c).

    Features where both variances vanish but means differ would score +inf;
    they get twice the largest finite score instead (1.0 if none is finite).
    """
    a, c = _groups(ds, 2)
    num = a.mean(axis=0) - c.mean(axis=0)
    den = np.sqrt(a.var(axis=0, ddof=1) / a.shape[0] + c.var(axis=0, ddof=1) / c.shape[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.abs(num) / den
    t[(den == 0) & (num == 0)] = 0.0
    inf = ~np.isfinite(t)
    if inf.any():
        finite = t[~inf]
        t[inf] = 2.0 * finite.max() if finite.size and finite.max() > 0 else 1.0
    return _ranked(RankMethod.TTEST, t)


def entropy_scores(ds: LabeledDataset) -> RankedFeatures:
    """Symmetric KL divergence between per-class Gaussian fits."""
    a, c = _groups(ds, 2)
    va = np.maximum(a.var(axis=0, ddof=1), VARIANCE_FLOOR)
    vc = np.maximum(c.var(axis=0, ddof=1), VARIANCE_FLOOR)
    d2 = (a.mean(axis=0) - c.mean(axis=0)) ** 2
    score = 0.5 * ((va / vc + vc / va - 2.0) + d2 * (1.0 / va + 1.0 / vc))
    return _ranked(RankMethod.ENTROPY, np.maximum(score, 0.0))


def _cancer_rank_sums(a, c):
    ranks = rankdata(np.vstack([a, c]), axis=0)
    return ranks[: a.shape[0]].sum(axis=0)


def roc_auc_scores(ds: LabeledDataset) -> RankedFeatures:
    """|AUC - 0.5| with ties counted as half a win."""
    a, c = _groups(ds, 1)
    na, nc = a.shape[0], c.shape[0]
    u = _cancer_rank_sums(a, c) - na * (na + 1) / 2.0
    # |U - na*nc/2| is exact in half-integers, so tied features stay tied
    return _ranked(RankMethod.ROC, np.abs(u - na * nc / 2.0) / (na * nc))


def wilcoxon_scores(ds: LabeledDataset) -> RankedFeatures:
    """|W - mu_W| / sigma_W for the cancer rank sum; midranks, no tie correction."""
    a, c = _groups(ds, 1)
    na, nc = a.shape[0], c.shape[0]
    if na + nc < 4:
        raise ArgumentError(f"Wilcoxon needs >= 4 samples in total, got {na + nc}")
    mu = na * (na + nc + 1) / 2.0
    sigma = np.sqrt(na * nc * (na + nc + 1) / 12.0)
    if sigma == 0:
        raise ArgumentError("degenerate group sizes: sigma_W is zero")
    w = _cancer_rank_sums(a, c)
    return _ranked(RankMethod.WILCOXON, np.abs(w - mu) / sigma)


_SCORERS = {
    RankMethod.TTEST: t_test_scores,
    RankMethod.ENTROPY: entropy_scores,
    RankMethod.ROC: roc_auc_scores,
    RankMethod.WILCOXON: wilcoxon_scores,
}


def rank(ds: LabeledDataset, method) -> RankedFeatures:
    return _SCORERS[RankMethod.parse(method)](ds)
