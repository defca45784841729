"""Standalone figure renderer for the EEG emotion pipeline's JSON artifacts."""

__version__ = "0.1.0"

from .render import CLASS_COLORS, FigureJob, render
from .schema import ArtifactError, load_artifact

__all__ = ["ArtifactError", "CLASS_COLORS", "FigureJob", "load_artifact", "render", "__version__"]
