"""Three-way EEG emotion classification pipeline.

Raw-signal preprocessing, spectral and statistical feature extraction,
feature-space analysis, three from-scratch classifiers, and a shared
evaluation harness, orchestrated by a subcommand CLI that writes JSON
artifacts for an external figure renderer.
"""

__version__ = "0.1.0"

from . import analysis, dataio, dsp, evaluate, featext, models
from .errors import EegemoError

__all__ = ["analysis", "dataio", "dsp", "evaluate", "featext", "models", "EegemoError", "__version__"]
