"""Seeded synthetic spectra with planted class-dependent peaks.

Each sample is built from:

* background peaks shared verbatim by every sample,
* at every planted index a "host" peak whose height varies per sample
  (``abundance_jitter``), plus a narrower increment of ``amplitude`` that
  only cancer samples carry,
* an optional per-sample baseline and white noise of ``noise_std``.

The host jitter keeps any single planted feature from separating the classes
on its own, so subset search has to combine several of them.

``oracle_rank`` is a slow, loop-based scorer used to cross-check
:mod:`specfs.ranking`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ranking import RankMethod, VARIANCE_FLOOR
from .spectra import CANCER, NORMAL, LabeledDataset


class Baseline(str, enum.Enum):
    NONE = "none"
    LINEAR = "linear"
    SINUSOIDAL = "sinusoidal"


@dataclass(frozen=True)
class SynthConfig:
    n_cancer: int = 121
    n_normal: int = 95
    grid_points: int = 2000
    mz_min: float = 700.0
    mz_max: float = 12000.0
    # explicit ((index, amplitude), ...); None draws n_planted sites from the seed
    planted: tuple | None = None
    n_planted: int = 20
    amplitude: float = 1.0
    peak_width: float = 1.0
    noise_std: float = 0.1
    abundance_jitter: float = 0.5
    n_background: int = 30
    baseline: Baseline = Baseline.NONE
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "baseline", Baseline(self.baseline))
        except ValueError:
            raise ConfigError(f"unknown baseline {self.baseline!r}") from None
        if self.n_cancer < 0 or self.n_normal < 0:
            raise ConfigError("group sizes must be non-negative")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if not self.mz_min < self.mz_max:
            raise ConfigError("mz_min must be below mz_max")
        if not self.peak_width > 0:
            raise ConfigError("peak_width must be positive")
        if self.noise_std < 0 or self.abundance_jitter < 0:
            raise ConfigError("noise_std and abundance_jitter must be non-negative")
        if self.planted is not None:
            planted = tuple((int(i), float(a)) for i, a in self.planted)
            idx = [i for i, _ in planted]
            if len(set(idx)) != len(idx):
                raise ConfigError("planted indices must be distinct")
            if any(not 0 <= i < self.grid_points for i in idx):
                raise ConfigError("planted index out of range")
            if any(not a > 0 for _, a in planted):
                raise ConfigError("planted amplitudes must be positive")
            object.__setattr__(self, "planted", planted)
        else:
            if self.n_planted < 0:
                raise ConfigError("n_planted must be non-negative")
            if not self.amplitude > 0:
                raise ConfigError("amplitude must be positive")
            if self.n_planted * (2 * self.radius + 2) > self.grid_points - 2 * self.radius:
                raise ConfigError("too many planted sites for the grid")

    @property
    def radius(self) -> int:
        return int(math.ceil(3 * self.peak_width))


def _profile(offsets, width):
    return np.exp(-0.5 * (offsets / width) ** 2)


def _draw_sites(cfg: SynthConfig, rng) -> list:
    r = cfg.radius
    lo, hi = r, cfg.grid_points - r
    chosen: list[int] = []
    while len(chosen) < cfg.n_planted:
        i = int(rng.integers(lo, hi))
        if all(abs(i - j) > 2 * r + 1 for j in chosen):
            chosen.append(i)
    return [(i, cfg.amplitude) for i in sorted(chosen)]


def generate(cfg: SynthConfig = SynthConfig()):
    """Build a dataset; returns ``(LabeledDataset, planted_indices)``."""
    rng = np.random.default_rng(cfg.seed)
    p = cfg.grid_points
    grid = np.linspace(cfg.mz_min, cfg.mz_max, p)
    pos = np.arange(p, dtype=float)

    sites = list(cfg.planted) if cfg.planted is not None else _draw_sites(cfg, rng)

    background = np.zeros(p)
    for _ in range(cfg.n_background):
        centre = rng.uniform(0, p - 1)
        height = rng.uniform(0.5, 3.0) * cfg.amplitude
        width = rng.uniform(2.0, 6.0) * cfg.peak_width
        background += height * _profile(pos - centre, width)

    r = cfg.radius
    n = cfg.n_cancer + cfg.n_normal
    y = np.array([CANCER] * cfg.n_cancer + [NORMAL] * cfg.n_normal, dtype=np.int64)
    X = np.tile(background, (n, 1))

    for idx, amp in sites:
        lo, hi = max(0, idx - r), min(p, idx + r + 1)
        off = pos[lo:hi] - idx
        host = _profile(off, 1.5 * cfg.peak_width)
        bump = _profile(off, cfg.peak_width)
        heights = 2.0 * amp + amp * cfg.abundance_jitter * rng.standard_normal(n)
        X[:, lo:hi] += heights[:, None] * host + (y == CANCER)[:, None] * (amp * bump)

    t = np.linspace(0.0, 1.0, p)
    if cfg.baseline is Baseline.LINEAR:
        start = rng.uniform(0.2, 0.5, n) * cfg.amplitude
        slope = rng.uniform(0.1, 0.4, n) * cfg.amplitude
        X += start[:, None] + slope[:, None] * t
    elif cfg.baseline is Baseline.SINUSOIDAL:
        level = rng.uniform(0.2, 0.5, n) * cfg.amplitude
        phase = rng.uniform(0, 2 * np.pi, n)
        X += level[:, None] * (1.0 + np.sin(2 * np.pi * 1.5 * t + phase[:, None]))

    if cfg.noise_std > 0:
        X += cfg.noise_std * rng.standard_normal(X.shape)

    ids = tuple(f"c{i:03d}" for i in range(cfg.n_cancer)) + tuple(
        f"n{i:03d}" for i in range(cfg.n_normal)
    )
    planted = np.array(sorted(i for i, _ in sites), dtype=np.int64)
    return LabeledDataset(grid, X, y, ids), planted


# --------------------------------------------------------------------------- naive oracle


def _mean(v):
    return sum(v) / len(v)


def _var(v):
    m = _mean(v)
    return sum((x - m) ** 2 for x in v) / (len(v) - 1)


def _midranks(values):
    """Explicit rank table: 1-based positions, tied runs share their average."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + 1 + j + 1) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _oracle_t(a, c):
    num = _mean(a) - _mean(c)
    den = math.sqrt(_var(a) / len(a) + _var(c) / len(c))
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return abs(num) / den


def _oracle_entropy(a, c):
    va, vc = max(_var(a), VARIANCE_FLOOR), max(_var(c), VARIANCE_FLOOR)
    d2 = (_mean(a) - _mean(c)) ** 2
    return 0.5 * ((va / vc + vc / va - 2.0) + d2 * (1.0 / va + 1.0 / vc))


def oracle_auc(a, c):
    wins = 0.0
    for u in a:
        for v in c:
            if u > v:
                wins += 1.0
            elif u == v:
                wins += 0.5
    return wins / (len(a) * len(c))


def _oracle_wilcoxon(a, c):
    na, nc = len(a), len(c)
    ranks = _midranks(list(a) + list(c))
    w = sum(ranks[:na])
    mu = na * (na + nc + 1) / 2.0
    sigma = math.sqrt(na * nc * (na + nc + 1) / 12.0)
    return abs(w - mu) / sigma


def oracle_rank(ds: LabeledDataset, method) -> np.ndarray:
    """Direct-from-definition per-feature scores (same conventions as ``ranking``)."""
    method = RankMethod.parse(method)
    cancer = [i for i in range(ds.n_samples) if ds.y[i] == CANCER]
    normal = [i for i in range(ds.n_samples) if ds.y[i] == NORMAL]
    scores = []
    for j in range(ds.n_features):
        a = [float(ds.X[i, j]) for i in cancer]
        c = [float(ds.X[i, j]) for i in normal]
        if method is RankMethod.TTEST:
            scores.append(_oracle_t(a, c))
        elif method is RankMethod.ENTROPY:
            scores.append(_oracle_entropy(a, c))
        elif method is RankMethod.ROC:
            scores.append(abs(oracle_auc(a, c) - 0.5))
        else:
            scores.append(_oracle_wilcoxon(a, c))
    scores = np.array(scores)
    inf = ~np.isfinite(scores)
    if inf.any():
        finite = scores[~inf]
        scores[inf] = 2.0 * finite.max() if finite.size and finite.max() > 0 else 1.0
    return scores
