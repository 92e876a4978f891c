"""Spectrum types and the four preprocessing steps.

Steps run in the order resample -> baseline_correct -> normalize -> denoise.
All functions return new objects; inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import minimum_filter1d, uniform_filter1d

from ._parallel import pmap
from .errors import ArgumentError, ConfigError, DegenerateInputError, RangeError, SpecfsError

NORMAL = 0
CANCER = 1
LABEL_NAMES = {NORMAL: "normal", CANCER: "cancer"}


def parse_label(text: str) -> int:
    key = text.strip().lower()
    for value, name in LABEL_NAMES.items():
        if key == name:
            return value
    raise ArgumentError(f"unknown label {text!r} (expected cancer|normal)")


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Spectrum:
    mz: np.ndarray
    intensity: np.ndarray
    id: str = ""

    def __post_init__(self):
        mz = _frozen(self.mz)
        inten = _frozen(self.intensity)
        if mz.ndim != 1 or inten.shape != mz.shape:
            raise ArgumentError(f"spectrum {self.id!r}: mz and intensity must be 1-D of equal length")
        if mz.size < 2:
            raise ArgumentError(f"spectrum {self.id!r}: need at least 2 points")
        if not np.all(np.isfinite(mz)) or np.any(np.diff(mz) <= 0):
            raise ArgumentError(f"spectrum {self.id!r}: mz must be finite and strictly increasing")
        if not np.all(np.isfinite(inten)):
            raise ArgumentError(f"spectrum {self.id!r}: intensities must be finite")
        object.__setattr__(self, "mz", mz)
        object.__setattr__(self, "intensity", inten)

    def __len__(self):
        return self.mz.size

    def with_intensity(self, intensity) -> "Spectrum":
        return Spectrum(self.mz, intensity, self.id)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Spectra on a shared m/z grid; ``X`` is samples x features, ``y`` holds 0/1 labels."""

    grid: np.ndarray
    X: np.ndarray
    y: np.ndarray
    ids: tuple = ()

    def __post_init__(self):
        grid = _frozen(self.grid)
        X = _frozen(self.X)
        y = _frozen(self.y, dtype=np.int64)
        if X.ndim != 2:
            X = _frozen(X.reshape(len(y), grid.size))
        if grid.ndim != 1 or X.shape[1] != grid.size:
            raise ArgumentError("every intensity vector must have the grid length")
        if y.shape != (X.shape[0],):
            raise ArgumentError("one label per sample required")
        if np.any(np.diff(grid) <= 0):
            raise ArgumentError("grid must be strictly increasing")
        if not np.all(np.isin(y, (NORMAL, CANCER))):
            raise ArgumentError("labels must be NORMAL (0) or CANCER (1)")
        if not np.all(np.isfinite(X)):
            raise ArgumentError("intensities must be finite")
        ids = tuple(self.ids) if self.ids else tuple(f"s{i}" for i in range(len(y)))
        if len(ids) != len(y):
            raise ArgumentError("one id per sample required")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "ids", ids)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> dict:
        return {
            "cancer": int(np.sum(self.y == CANCER)),
            "normal": int(np.sum(self.y == NORMAL)),
        }

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.grid, self.X[idx], self.y[idx], tuple(self.ids[i] for i in idx))

    def spectrum(self, i: int) -> Spectrum:
        return Spectrum(self.grid, self.X[i], self.ids[i])


@dataclass(frozen=True)
class PreprocessConfig:
    grid_points: int = 15000
    baseline_window: int = 200
    smooth_window: int = 11
    normalize_target: float = 1.0
    # peaks must clear the smoothed curve by this many robust noise sigmas to be kept;
    # 0 keeps every strict local maximum
    peak_prominence: float = 4.0

    def __post_init__(self):
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if not 1 <= self.baseline_window < self.grid_points:
            raise ConfigError("baseline_window must be in [1, grid_points)")
        if self.smooth_window < 3 or self.smooth_window % 2 == 0:
            raise ConfigError("smooth_window must be odd and >= 3")
        if not self.normalize_target > 0:
            raise ConfigError("normalize_target must be positive")
        if self.peak_prominence < 0:
            raise ConfigError("peak_prominence must be non-negative")


def resample(s: Spectrum, grid) -> Spectrum:
    """Linearly interpolate ``s`` onto ``grid`` (which must lie inside the spectrum's range)."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ArgumentError("target grid must be strictly increasing with >= 2 points")
    if grid[0] < s.mz[0] or grid[-1] > s.mz[-1]:
        raise RangeError(
            f"grid [{grid[0]}, {grid[-1]}] extends beyond spectrum range [{s.mz[0]}, {s.mz[-1]}]"
        )
    return Spectrum(grid, np.interp(grid, s.mz, s.intensity), s.id)


def baseline_correct(s: Spectrum, window: int) -> Spectrum:
    n = len(s)
    if window < 1 or window >= n:
        raise ArgumentError(f"baseline window {window} must be in [1, {n})")
    floor = minimum_filter1d(s.intensity, size=window, mode="nearest")
    baseline = uniform_filter1d(floor, size=window, mode="nearest")
    return s.with_intensity(np.maximum(s.intensity - baseline, 0.0))


def normalize(s: Spectrum, target: float = 1.0) -> Spectrum:
    peak = s.intensity.max()
    if not peak > 0:
        raise DegenerateInputError(f"spectrum {s.id!r} has no positive intensity to normalize")
    return s.with_intensity(s.intensity * (target / peak))


def noise_sigma(y: np.ndarray) -> float:
    """Robust white-noise level from the MAD of first differences."""
    d = np.diff(y)
    mad = np.median(np.abs(d - np.median(d)))
    return float(1.4826 * mad / np.sqrt(2.0))


def denoise(s: Spectrum, window: int, peak_prominence: float = 4.0) -> Spectrum:
    """Centered moving average that leaves significant local maxima untouched.

    Windows shrink at the edges. A point keeps its original value when it is
    strictly greater than every other point in its window and exceeds the
    smoothed value by more than ``peak_prominence`` robust noise sigmas.
    """
    n = len(s)
    if window < 3 or window % 2 == 0 or window >= n:
        raise ArgumentError(f"smoothing window {window} must be odd, >= 3 and < {n}")
    y = s.intensity
    half = window // 2
    padded = np.pad(y, half, constant_values=np.nan)
    win = sliding_window_view(padded, window)
    # the clamp only absorbs rounding: a window mean never exceeds the window max
    smoothed = np.minimum(np.nanmean(win, axis=1), np.nanmax(win, axis=1))
    others = np.delete(win, half, axis=1)
    strict_max = y > np.nanmax(others, axis=1)
    keep = strict_max & (y - smoothed > peak_prominence * noise_sigma(y))
    return s.with_intensity(np.where(keep, y, smoothed))


def _preprocess_one(spectrum: Spectrum, grid: np.ndarray, cfg: PreprocessConfig) -> np.ndarray:
    try:
        out = resample(spectrum, grid)
        out = baseline_correct(out, cfg.baseline_window)
        out = normalize(out, cfg.normalize_target)
        out = denoise(out, cfg.smooth_window, cfg.peak_prominence)
    except SpecfsError as exc:
        err = type(exc)(f"sample {spectrum.id!r}: {exc}")
        err.sample_id = spectrum.id
        raise err from exc
    return out.intensity


def common_grid(spectra: Iterable[Spectrum], points: int) -> np.ndarray:
    spectra = list(spectra)
    lo = max(float(s.mz[0]) for s in spectra)
    hi = min(float(s.mz[-1]) for s in spectra)
    if not lo < hi:
        raise RangeError(f"samples share no common m/z range (max start {lo}, min end {hi})")
    return np.linspace(lo, hi, points)


def preprocess(samples: Sequence[tuple], cfg: PreprocessConfig = PreprocessConfig()) -> LabeledDataset:
    """Run the full preprocessing chain over ``(Spectrum, label)`` pairs."""
    samples = list(samples)
    if not samples:
        return LabeledDataset(np.empty(0), np.empty((0, 0)), np.empty(0, dtype=np.int64))
    spectra = [s for s, _ in samples]
    grid = common_grid(spectra, cfg.grid_points)
    rows = pmap(lambda s: _preprocess_one(s, grid, cfg), spectra)
    labels = [parse_label(lab) if isinstance(lab, str) else int(lab) for _, lab in samples]
    return LabeledDataset(grid, np.vstack(rows), np.array(labels), tuple(s.id for s in spectra))
