"""Content-based file-type detection from byte-frequency fingerprints.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports its public surface.
"""

from ._core import (
    ConfusionMatrix,
    FileprintError,
    Model,
    Prediction,
    bfd,
    evaluate,
    pca_error_curve,
    synth_corpus,
    train,
)

__all__ = [
    "ConfusionMatrix",
    "FileprintError",
    "Model",
    "Prediction",
    "bfd",
    "evaluate",
    "pca_error_curve",
    "synth_corpus",
    "train",
]

__version__ = "0.1.0"
