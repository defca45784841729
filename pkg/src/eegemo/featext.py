"""Windowing and per-window feature extraction.

A recording is cut into consecutive non-overlapping one-second windows per
offset stream (offsets 0 and 0.5 s jointly realize a half-second stride).
Each window yields 12 features per channel: seven shape statistics and five
band powers.  Standardization statistics are fit on training rows only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataio import EegRecording
from .dsp import EEG_BANDS, PsdEstimate, band_power, welch_psd
from .errors import RecordingTooShortError

STAT_NAMES = ("mean", "std", "min", "max", "range", "skew", "kurtosis")
BAND_FEATURE_NAMES = tuple(f"power_{band.name.lower()}" for band in EEG_BANDS)
FEATURES_PER_CHANNEL = len(STAT_NAMES) + len(BAND_FEATURE_NAMES)


@dataclass(frozen=True)
class WindowPlan:
    """Sliding-window layout: window length and stream offsets, in seconds."""

    window_seconds: float = 1.0
    offsets_seconds: tuple[float, ...] = (0.0, 0.5)

    def __post_init__(self):
        if self.window_seconds <= 0:
            raise ValueError("window_seconds must be > 0")
        offs = tuple(float(o) for o in self.offsets_seconds)
        if any(not 0 <= o < self.window_seconds for o in offs):
            raise ValueError("offsets must lie in [0, window_seconds)")
        object.__setattr__(self, "offsets_seconds", offs)


@dataclass(frozen=True)
class WindowSegment:
    """One window of a recording, tagged with its stream offset and start time."""

    samples: np.ndarray  # (n_channels, window_samples)
    channel_names: tuple[str, ...]
    sampling_rate: float
    offset_seconds: float
    start_seconds: float


@dataclass(frozen=True)
class WelchConfig:
    """Welch parameters for per-window band-power features.

    ``segment_length`` of None uses the whole window as a single segment.
    """

    segment_length: int | None = None
    overlap_fraction: float = 0.5


def sliding_windows(recording: EegRecording, plan: WindowPlan | None = None) -> list[WindowSegment]:
    """Cut consecutive non-overlapping windows per offset stream.

    Partial trailing windows are discarded.  Output is ordered by
    (offset, start_time).
    """
    plan = plan or WindowPlan()
    fs = recording.sampling_rate
    window_samples = int(round(plan.window_seconds * fs))
    if recording.n_samples < window_samples:
        raise RecordingTooShortError(
            f"recording of {recording.duration:.3f} s is shorter than one "
            f"{plan.window_seconds:.3f} s window"
        )
    windows = []
    for offset in plan.offsets_seconds:
        start = int(round(offset * fs))
        while start + window_samples <= recording.n_samples:
            windows.append(
                WindowSegment(
                    samples=recording.samples[:, start : start + window_samples],
                    channel_names=recording.channel_names,
                    sampling_rate=fs,
                    offset_seconds=offset,
                    start_seconds=start / fs,
                )
            )
            start += window_samples
    return windows


def window_count(duration_seconds: float, plan: WindowPlan) -> int:
    """Expected window count: sum over offsets of floor((duration - offset) / w)."""
    return sum(
        int(np.floor((duration_seconds - o) / plan.window_seconds + 1e-9))
        for o in plan.offsets_seconds
    )


def _channel_stats(x: np.ndarray) -> list[float]:
    mean = float(np.mean(x))
    std = float(np.std(x, ddof=1))
    lo = float(np.min(x))
    hi = float(np.max(x))
    centered = x - mean
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        skew = 0.0
        kurt = 0.0
    else:
        skew = float(np.mean(centered**3)) / m2**1.5
        kurt = float(np.mean(centered**4)) / m2**2 - 3.0  # excess (Fisher)
    return [mean, std, lo, hi, hi - lo, skew, kurt]


def feature_names_for(channel_names) -> tuple[str, ...]:
    names = []
    for ch in channel_names:
        names.extend(f"{ch}_{stat}" for stat in STAT_NAMES)
        names.extend(f"{ch}_{band}" for band in BAND_FEATURE_NAMES)
    return tuple(names)


def window_features(window: WindowSegment, psd_config: WelchConfig | None = None) -> tuple[tuple[str, ...], np.ndarray]:
    """Feature vector for one window: 12 features per channel.

    Per channel: mean, sample (n-1) standard deviation, min, max, range,
    skewness, excess kurtosis, then the five band powers integrated from a
    Welch PSD of the window.  Returns (feature_names, values).
    """
    config = psd_config or WelchConfig()
    n = window.samples.shape[1]
    if n < 8:
        raise RecordingTooShortError(f"window has {n} samples; need >= 8")
    segment = n if config.segment_length is None else min(config.segment_length, n)
    rec = EegRecording(window.channel_names, window.samples, window.sampling_rate)
    psd = welch_psd(rec, segment_length=segment, overlap_fraction=config.overlap_fraction)
    powers = np.column_stack([band_power(psd, band) for band in EEG_BANDS])
    values = []
    for ch in range(window.samples.shape[0]):
        values.extend(_channel_stats(window.samples[ch]))
        values.extend(powers[ch])
    return feature_names_for(window.channel_names), np.asarray(values)


@dataclass(frozen=True)
class FeatureTable:
    """Extracted per-window features plus the (offset, start) tags."""

    feature_names: tuple[str, ...]
    values: np.ndarray  # (n_windows, n_features)
    offsets_seconds: np.ndarray
    starts_seconds: np.ndarray


def extract_features(
    recording: EegRecording,
    plan: WindowPlan | None = None,
    psd_config: WelchConfig | None = None,
) -> FeatureTable:
    """Window a recording and featurize every window, ordered by (offset, start)."""
    windows = sliding_windows(recording, plan)
    names = feature_names_for(recording.channel_names)
    values = np.empty((len(windows), len(names)))
    for i, win in enumerate(windows):
        _, values[i] = window_features(win, psd_config)
    return FeatureTable(
        names,
        values,
        np.asarray([w.offset_seconds for w in windows]),
        np.asarray([w.start_seconds for w in windows]),
    )


@dataclass(frozen=True)
class Standardizer:
    """Per-feature (x - mean) / std map with statistics from training rows only.

    Zero-variance features are flagged and passed through centered but
    unscaled.
    """

    means: np.ndarray
    std_devs: np.ndarray  # 1.0 where the feature was constant
    constant_mask: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.constant_mask is None:
            object.__setattr__(self, "constant_mask", np.zeros(len(self.means), dtype=bool))

    @property
    def n_features(self) -> int:
        return len(self.means)


def fit_standardizer(train_features: np.ndarray) -> Standardizer:
    """Fit means and sample (n-1) standard deviations on training rows."""
    x = np.asarray(train_features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("training matrix must be 2-D and non-empty")
    means = x.mean(axis=0)
    if x.shape[0] > 1:
        stds = x.std(axis=0, ddof=1)
    else:
        stds = np.zeros(x.shape[1])
    constant = stds == 0.0
    safe = np.where(constant, 1.0, stds)
    return Standardizer(means, safe, constant)


def apply_standardizer(standardizer: Standardizer, features: np.ndarray) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.shape[1] != standardizer.n_features:
        raise ValueError(
            f"feature count {x.shape[1]} does not match standardizer ({standardizer.n_features})"
        )
    return (x - standardizer.means) / standardizer.std_devs
