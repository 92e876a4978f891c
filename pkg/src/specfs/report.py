"""Pipeline report container and its on-disk form."""
from __future__ import annotations

import dataclasses
import enum
import json
import time
from contextlib import contextmanager
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import SpecfsError, StageError
from .io import atomic_write_text, canonical_json, write_csv


@dataclasses.dataclass
class PipelineReport:
    pipeline: int
    config: dict
    seed: int
    dataset: dict
    selected_features: list  # [{"index": int, "mz": float}]
    test_accuracy: float
    confusion: list
    model: dict
    ranking_method: str | None = None
    curve: dict | None = None
    ga: dict | None = None
    tool_version: str = __version__
    # wall-clock per stage; kept out of report.json so that file stays reproducible
    timings: dict = dataclasses.field(default_factory=dict, compare=False)
    # in-memory models written beside the report (e.g. the PCA basis)
    artifacts: dict = dataclasses.field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "pipeline": self.pipeline,
            "config": self.config,
            "seed": self.seed,
            "dataset": self.dataset,
            "ranking_method": self.ranking_method,
            "curve": self.curve,
            "ga": self.ga,
            "selected_features": self.selected_features,
            "test_accuracy": self.test_accuracy,
            "confusion": self.confusion,
            "model": self.model,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        atomic_write_text(out / "report.json", self.to_json())
        atomic_write_text(out / "timings.json", canonical_json(self.timings))
        write_csv(
            out / "selected_features.csv",
            ["feature_index", "mz"],
            ((f["index"], float(f["mz"])) for f in self.selected_features),
        )
        if "pca_model" in self.artifacts:
            atomic_write_text(out / "pca_model.json",
                              canonical_json(self.artifacts["pca_model"].to_dict()))
        if "pattern" in self.artifacts:
            grid, mean, mask = self.artifacts["pattern"]
            write_csv(out / "pattern.csv", ["mz", "mean_intensity", "selected"],
                      ((float(m), float(v), int(f)) for m, v, f in zip(grid, mean, mask)))
        if self.curve is not None:
            write_csv(out / "curve.csv", ["k", "accuracy"],
                      ((k, float(a)) for k, a in self.curve["points"]))
        if self.ga is not None:
            write_csv(
                out / "ga_history.csv",
                ["generation", "best_fitness", "mean_fitness"],
                ((h["generation"], float(h["best_fitness"]), float(h["mean_fitness"]))
                 for h in self.ga["history"]),
            )


def report_schema() -> dict:
    text = resources.files("specfs").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


class StageClock:
    """Times named stages and wraps their failures in :class:`StageError`."""

    def __init__(self):
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name):
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except (SpecfsError, ValueError, ArithmeticError, RuntimeError) as exc:
            raise StageError(name, exc) from exc
        finally:
            self.timings[name] = time.perf_counter() - start


def dataset_digest(ds, split) -> dict:
    y_train, y_test = ds.y[split.train_indices], ds.y[split.test_indices]
    return {
        **ds.class_counts(),
        "grid_length": ds.n_features,
        "n_samples": ds.n_samples,
        "n_train": int(split.train_indices.size),
        "n_test": int(split.test_indices.size),
        "train_cancer": int((y_train == 1).sum()),
        "test_cancer": int((y_test == 1).sum()),
    }


def selected_list(indices, grid) -> list:
    return [{"index": int(i), "mz": float(grid[i])} for i in indices]


def config_dict(cfg) -> dict:
    """Dataclass config as plain JSON-ready data (enums by value)."""
    def conv(v):
        if dataclasses.is_dataclass(v):
            return {f.name: conv(getattr(v, f.name)) for f in dataclasses.fields(v)}
        if isinstance(v, enum.Enum):
            return v.value
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        return v

    return conv(cfg)
