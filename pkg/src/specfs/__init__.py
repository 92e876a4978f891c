"""Feature selection for mass-spectrometry serum profiles.

Two pipelines are provided: filter ranking + PCA + LDA wrapper sweep
(:func:`specfs.wrapper.run_pipeline1`) and genetic-algorithm subset search
validated by a small neural network (:func:`specfs.ga.run_pipeline2`).
"""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    ConfigError,
    DataFormatError,
    DegenerateInputError,
    RangeError,
    SpecfsError,
    StageError,
    TrainingDivergenceError,
)
from .spectra import CANCER, NORMAL, LabeledDataset, PreprocessConfig, Spectrum

__all__ = [
    "__version__",
    "ArgumentError",
    "ConfigError",
    "DataFormatError",
    "DegenerateInputError",
    "RangeError",
    "SpecfsError",
    "StageError",
    "TrainingDivergenceError",
    "CANCER",
    "NORMAL",
    "LabeledDataset",
    "PreprocessConfig",
    "Spectrum",
]
