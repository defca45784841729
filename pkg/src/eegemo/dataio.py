"""Dataset and recording I/O: CSV loaders, synthetic data, JSON artifacts.

CSV is the only ingestion format (decimal point, comma separator, header row
required).  NaN/Inf cells are hard errors, never imputed.  All analysis
products are written as JSON artifacts ``{schema_version, kind, payload}`` so
an external renderer can consume them without importing this package.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ArtifactSchemaError,
    DataFormatError,
    EmptyFileError,
    NonFiniteCellError,
    NonNumericCellError,
    RaggedRowError,
    UnknownLabelError,
)

log = logging.getLogger(__name__)

ARTIFACT_SCHEMA_VERSION = 1

LABEL_NAMES = {0: "NEGATIVE", 1: "NEUTRAL", 2: "POSITIVE"}
NAME_TO_LABEL = {name: code for code, name in LABEL_NAMES.items()}


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix (rows = windows/samples) with integer emotion labels.

    Labels are always encoded NEGATIVE=0, NEUTRAL=1, POSITIVE=2.
    """

    features: np.ndarray  # (n_samples, n_features) float64
    feature_names: tuple[str, ...]
    labels: np.ndarray  # (n_samples,) int

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if feats.ndim != 2:
            raise DataFormatError("features must be a 2-D matrix")
        if feats.shape[0] != labels.shape[0]:
            raise DataFormatError("label count does not match sample count")
        if feats.shape[1] != len(self.feature_names):
            raise DataFormatError("feature_names length does not match feature count")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DataFormatError("feature names must be unique")
        if not np.all(np.isfinite(feats)):
            raise DataFormatError("features contain NaN/Inf entries")
        if not np.all(np.isin(labels, list(LABEL_NAMES))):
            raise DataFormatError("labels must be in {0, 1, 2}")
        object.__setattr__(self, "features", _readonly(feats))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "labels", _readonly(labels))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def label_names(self) -> dict[int, str]:
        return dict(LABEL_NAMES)

    def class_counts(self) -> dict[int, int]:
        return {c: int(np.sum(self.labels == c)) for c in sorted(LABEL_NAMES)}

    def subset(self, rows) -> "LabeledDataset":
        rows = np.asarray(rows, dtype=np.int64)
        return LabeledDataset(self.features[rows], self.feature_names, self.labels[rows])


@dataclass(frozen=True)
class EegRecording:
    """Multi-channel time series, samples in microvolts, one row per channel."""

    channel_names: tuple[str, ...]
    samples: np.ndarray  # (n_channels, n_samples) float64
    sampling_rate: float  # Hz

    artifact_kind = "timeseries"

    def __post_init__(self):
        samples = np.atleast_2d(np.asarray(self.samples, dtype=np.float64))
        if self.sampling_rate <= 0:
            raise DataFormatError("sampling_rate must be > 0")
        if samples.shape[0] != len(self.channel_names):
            raise DataFormatError("channel count does not match sample matrix")
        if len(set(self.channel_names)) != len(self.channel_names):
            raise DataFormatError("channel names must be unique")
        object.__setattr__(self, "channel_names", tuple(self.channel_names))
        object.__setattr__(self, "samples", _readonly(samples))
        object.__setattr__(self, "sampling_rate", float(self.sampling_rate))

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        """Recording length in seconds."""
        return self.n_samples / self.sampling_rate

    def with_samples(self, samples: np.ndarray, sampling_rate: float | None = None) -> "EegRecording":
        """Same channels, new sample matrix (and optionally new rate)."""
        rate = self.sampling_rate if sampling_rate is None else sampling_rate
        return EegRecording(self.channel_names, samples, rate)

    def payload_dict(self) -> dict:
        return {
            "channel_names": list(self.channel_names),
            "sampling_rate_hz": self.sampling_rate,
            "samples": self.samples.tolist(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "EegRecording":
        return cls(
            tuple(payload["channel_names"]),
            np.asarray(payload["samples"], dtype=np.float64),
            float(payload["sampling_rate_hz"]),
        )


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the Gaussian three-class test dataset.

    ``class_separation`` is the pairwise distance between class means in
    units of the (unit) within-class standard deviation.
    """

    n_per_class: int
    n_features: int
    class_separation: float
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 2:
            raise ValueError("n_per_class must be >= 2")
        if self.n_features < 1:
            raise ValueError("n_features must be >= 1")
        if self.class_separation < 0:
            raise ValueError("class_separation must be >= 0")


def _parse_label(raw: str, row: int) -> int:
    text = raw.strip()
    code = NAME_TO_LABEL.get(text.upper())
    if code is not None:
        return code
    try:
        value = float(text)
    except ValueError:
        raise UnknownLabelError(row, raw) from None
    if value in (0.0, 1.0, 2.0):
        return int(value)
    raise UnknownLabelError(row, raw)


def load_feature_dataset(path, label_column: str = "label") -> LabeledDataset:
    """Load a labeled feature CSV (header row, one label column).

    Label cells may hold the class names (case-insensitive) or the codes
    0/1/2.  Any non-numeric or NaN/Inf feature cell aborts the load with an
    error naming the offending row and column.  Per-class counts are logged.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"feature dataset not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFileError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DataFormatError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        rows: list[list[str]] = []
        labels: list[int] = []
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise RaggedRowError(row_num, len(header), len(row))
            labels.append(_parse_label(row[label_idx], row_num))
            del row[label_idx]
            rows.append(row)
    if not rows:
        raise EmptyFileError(f"{path} has a header but no data rows")

    try:
        features = np.asarray(rows, dtype=np.float64)
    except ValueError:
        # Re-scan slowly to name the offending cell.
        for r, row in enumerate(rows, start=1):
            for c, cell in enumerate(row):
                try:
                    float(cell)
                except ValueError:
                    raise NonNumericCellError(r, feature_names[c], cell) from None
        raise  # unreachable: the fast path failed for another reason
    bad = np.argwhere(~np.isfinite(features))
    if bad.size:
        r, c = bad[0]
        raise NonFiniteCellError(int(r) + 1, feature_names[int(c)])

    dataset = LabeledDataset(features, tuple(feature_names), np.asarray(labels))
    counts = dataset.class_counts()
    log.info(
        "loaded %d samples x %d features from %s; class counts: %s",
        dataset.n_samples,
        dataset.n_features,
        path,
        {LABEL_NAMES[c]: n for c, n in counts.items()},
    )
    return dataset


def write_dataset_csv(dataset: LabeledDataset, path, label_column: str = "label") -> None:
    """Write a labeled dataset back to CSV (floats at full round-trip precision)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(dataset.feature_names) + [label_column])
        for row, code in zip(dataset.features, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [LABEL_NAMES[int(code)]])


def load_raw_eeg(path, sampling_rate: float) -> EegRecording:
    """Load a raw EEG CSV: header = channel names, one row per sample.

    The channel count is data-driven (4-channel headband files and larger
    montages load identically).
    """
    if sampling_rate <= 0:
        raise DataFormatError("sampling_rate must be > 0")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"raw EEG file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFileError(f"{path} is empty") from None
        channel_names = [h.strip() for h in header]
        rows: list[list[str]] = []
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(channel_names):
                raise RaggedRowError(row_num, len(channel_names), len(row))
            rows.append(row)
    if not rows:
        raise EmptyFileError(f"{path} has a header but no samples")
    try:
        samples = np.asarray(rows, dtype=np.float64)
    except ValueError:
        for r, row in enumerate(rows, start=1):
            for c, cell in enumerate(row):
                try:
                    float(cell)
                except ValueError:
                    raise NonNumericCellError(r, channel_names[c], cell) from None
        raise
    bad = np.argwhere(~np.isfinite(samples))
    if bad.size:
        r, c = bad[0]
        raise NonFiniteCellError(int(r) + 1, channel_names[int(c)])
    return EegRecording(tuple(channel_names), samples.T, sampling_rate)


def _class_means(n_features: int, separation: float) -> np.ndarray:
    """Three class means with pairwise distance = separation.

    Laid out as an equilateral triangle in the first two feature dimensions.
    With a single feature the means are collinear (adjacent spacing equals
    the separation; three mutually equidistant points need two dimensions).
    """
    means = np.zeros((3, n_features))
    if n_features == 1:
        means[:, 0] = [0.0, separation, 2.0 * separation]
    else:
        means[1, 0] = separation
        means[2, 0] = separation / 2.0
        means[2, 1] = separation * np.sqrt(3.0) / 2.0
    return means


def generate_synthetic(spec: SyntheticSpec) -> LabeledDataset:
    """Draw a balanced three-class Gaussian dataset; pure function of the spec."""
    rng = np.random.default_rng(spec.seed)
    means = _class_means(spec.n_features, spec.class_separation)
    blocks = [
        rng.normal(loc=means[c], scale=1.0, size=(spec.n_per_class, spec.n_features))
        for c in range(3)
    ]
    features = np.vstack(blocks)
    labels = np.repeat([0, 1, 2], spec.n_per_class)
    names = tuple(f"f{j + 1}" for j in range(spec.n_features))
    return LabeledDataset(features, names, labels)


# --- JSON artifacts ---------------------------------------------------------
#
# Payload schemas (consumed by the standalone renderer; keep in sync with
# README "Artifact schema"):
#   timeseries    {channel_names, sampling_rate_hz, samples[ch][t]}
#   psd           {channel_names, frequencies_hz, power[ch][f], segment_length,
#                  overlap_fraction}
#   correlation   {feature_names, values[i][j], constant_features}
#   significance  {alpha, label_names, classes:[{label, name, significant,
#                  non_significant}], tests:[{feature, label, t, df, p,
#                  significant}]}
#   embedding     {coordinates[n][2], labels, label_names, final_kl, perplexity}
#   confusion     {counts[3][3], label_names, model}
#   comparison    {rows:[{model, accuracy, ...}], best_model, ranking, provenance}
#   model         {model_type, ...}   (see models.serialize)

KNOWN_KINDS = (
    "timeseries",
    "psd",
    "correlation",
    "significance",
    "embedding",
    "confusion",
    "comparison",
    "model",
)


def write_artifact(payload_obj, path) -> str:
    """Serialize a result object to a JSON artifact; returns its sha256 hex digest.

    ``payload_obj`` must expose ``artifact_kind`` and ``payload_dict()``.
    Output is deterministic (sorted keys, repr-round-trip floats) so repeated
    runs produce byte-identical files.
    """
    kind = getattr(payload_obj, "artifact_kind", None)
    if kind is None or not callable(getattr(payload_obj, "payload_dict", None)):
        raise TypeError(f"{type(payload_obj).__name__} is not a serializable result type")
    return write_artifact_dict(kind, payload_obj.payload_dict(), path)


def write_artifact_dict(kind: str, payload: dict, path) -> str:
    if kind not in KNOWN_KINDS:
        raise ArtifactSchemaError(f"unknown artifact kind {kind!r}")
    document = {"schema_version": ARTIFACT_SCHEMA_VERSION, "kind": kind, "payload": payload}
    text = json.dumps(document, sort_keys=True, indent=2, allow_nan=False)
    path = Path(path)
    if not path.parent.is_dir():
        raise FileNotFoundError(f"artifact directory does not exist: {path.parent}")
    path.write_text(text + "\n")
    return hashlib.sha256((text + "\n").encode()).hexdigest()


def read_artifact(path) -> tuple[str, dict]:
    """Read a JSON artifact, returning (kind, payload) after version checking."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"artifact not found: {path}")
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ArtifactSchemaError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(document, dict) or "schema_version" not in document:
        raise ArtifactSchemaError(f"{path} is missing the schema_version field")
    version = document["schema_version"]
    if version != ARTIFACT_SCHEMA_VERSION:
        raise ArtifactSchemaError(
            f"{path} has schema_version {version}, supported: {ARTIFACT_SCHEMA_VERSION}"
        )
    if "kind" not in document or "payload" not in document:
        raise ArtifactSchemaError(f"{path} is missing kind/payload fields")
    return document["kind"], document["payload"]
