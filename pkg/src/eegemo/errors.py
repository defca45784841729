"""Exception types raised across the pipeline.

Every error the library raises deliberately derives from ``EegemoError`` so
the CLI can catch one base class and emit a machine-readable error record.
"""


class EegemoError(Exception):
    """Base class for all pipeline errors."""


class DataFormatError(EegemoError, ValueError):
    """A loaded file violates the expected CSV structure."""


class NonNumericCellError(DataFormatError):
    """A feature cell could not be parsed as a number."""

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"non-numeric cell at row {row}, column {column!r}: {value!r}")


class NonFiniteCellError(DataFormatError):
    """A feature cell parsed to NaN or +/-Inf."""

    def __init__(self, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(f"NaN/Inf cell at row {row}, column {column!r}")


class UnknownLabelError(DataFormatError):
    """A label cell maps to none of the three emotion classes."""

    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"unknown label at row {row}: {value!r}")


class RaggedRowError(DataFormatError):
    """A CSV row has a different number of cells than the header."""

    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        super().__init__(f"row {row} has {got} cells, expected {expected}")


class EmptyFileError(DataFormatError):
    """The file contains no data rows."""


class FilterDesignError(EegemoError, ValueError):
    """Filter band edges are invalid for the recording's sampling rate."""


class RecordingTooShortError(EegemoError, ValueError):
    """The recording has too few samples for the requested operation."""


class BandRangeError(EegemoError, ValueError):
    """A frequency band lies outside the available spectrum."""


class DegenerateVarianceError(EegemoError, ValueError):
    """Both samples of a two-sample test have zero variance."""


class InfeasiblePerplexityError(EegemoError, ValueError):
    """Requested perplexity is too large for the number of samples."""


class TrainingDivergedError(EegemoError, RuntimeError):
    """Optimization produced a non-finite loss (learning-rate misconfiguration)."""


class DimensionMismatchError(EegemoError, ValueError):
    """Feature count of the input does not match the trained model."""


class SplitError(EegemoError, ValueError):
    """A class is too small to appear in both train and test partitions."""


class EmptyEvaluationError(EegemoError, ValueError):
    """Metrics requested for an evaluation with zero samples."""


class ConfigError(EegemoError, ValueError):
    """Pipeline configuration is malformed or contains unknown keys."""


class ArtifactSchemaError(EegemoError, ValueError):
    """A JSON artifact is malformed or has an unsupported schema version."""
