"""Signal conditioning and spectral analysis.

Bandpass cleaning uses a Butterworth design applied forward-backward
(zero phase); spectra come from Welch's averaged periodogram with a Hann
window and density scaling, so integrating the PSD over frequency recovers
signal power (Parseval).  Band powers are trapezoidal integrals of the PSD
over the conventional EEG bands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .dataio import EegRecording
from .errors import BandRangeError, FilterDesignError, RecordingTooShortError

_trapezoid = getattr(np, "trapezoid", np.trapz)


@dataclass(frozen=True)
class BandDefinition:
    """A named EEG frequency band [low_hz, high_hz)."""

    name: str
    low_hz: float
    high_hz: float

    def __post_init__(self):
        if not 0 <= self.low_hz < self.high_hz:
            raise BandRangeError(f"invalid band {self.name}: {self.low_hz}-{self.high_hz} Hz")


#: Conventional EEG bands, non-overlapping and ordered by frequency.  Beta is
#: pinned at 13-30 Hz; Gamma runs from 30 Hz up to the default filter passband
#: edge (45 Hz).
EEG_BANDS = (
    BandDefinition("Delta", 0.5, 4.0),
    BandDefinition("Theta", 4.0, 8.0),
    BandDefinition("Alpha", 8.0, 13.0),
    BandDefinition("Beta", 13.0, 30.0),
    BandDefinition("Gamma", 30.0, 45.0),
)


@dataclass(frozen=True)
class FilterSpec:
    """Butterworth bandpass specification.

    ``order`` is the design order handed to the Butterworth designer; the
    bandpass realization has twice that many poles.  The filter is always
    applied forward-backward, which squares the magnitude response and
    cancels phase distortion.
    """

    low_hz: float = 0.5
    high_hz: float = 45.0
    order: int = 4

    def __post_init__(self):
        if self.order < 1:
            raise FilterDesignError("filter order must be >= 1")
        if not 0 < self.low_hz < self.high_hz:
            raise FilterDesignError(
                f"band edges must satisfy 0 < low < high, got {self.low_hz}-{self.high_hz}"
            )

    @property
    def transient_samples(self) -> int:
        """Samples at each end to treat as startup transient (3 x order)."""
        return 3 * self.order


@dataclass(frozen=True)
class PsdEstimate:
    """One-sided power spectral density per channel (signal variance per Hz)."""

    channel_names: tuple[str, ...]
    frequencies_hz: np.ndarray  # ascending, starts at 0, ends at Nyquist
    power: np.ndarray  # (n_channels, n_frequencies), >= 0
    segment_length: int
    overlap_fraction: float

    artifact_kind = "psd"

    def __post_init__(self):
        freqs = np.asarray(self.frequencies_hz, dtype=np.float64)
        power = np.atleast_2d(np.asarray(self.power, dtype=np.float64))
        if freqs[0] != 0 or np.any(np.diff(freqs) <= 0):
            raise ValueError("frequencies must start at 0 and ascend strictly")
        if power.shape != (len(self.channel_names), freqs.size):
            raise ValueError("power matrix shape does not match channels x frequencies")
        if np.any(power < 0):
            raise ValueError("PSD values must be non-negative")
        object.__setattr__(self, "frequencies_hz", freqs)
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def nyquist_hz(self) -> float:
        return float(self.frequencies_hz[-1])

    def total_power(self) -> np.ndarray:
        """Integral of the PSD over [0, Nyquist] per channel."""
        return _trapezoid(self.power, self.frequencies_hz, axis=1)

    def payload_dict(self) -> dict:
        return {
            "channel_names": list(self.channel_names),
            "frequencies_hz": self.frequencies_hz.tolist(),
            "power": self.power.tolist(),
            "segment_length": int(self.segment_length),
            "overlap_fraction": float(self.overlap_fraction),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "PsdEstimate":
        return cls(
            tuple(payload["channel_names"]),
            np.asarray(payload["frequencies_hz"], dtype=np.float64),
            np.asarray(payload["power"], dtype=np.float64),
            int(payload["segment_length"]),
            float(payload["overlap_fraction"]),
        )


def _design_ba(spec: FilterSpec, sampling_rate: float):
    nyquist = sampling_rate / 2.0
    if spec.high_hz >= nyquist:
        raise FilterDesignError(
            f"high edge {spec.high_hz} Hz must be below Nyquist ({nyquist} Hz)"
        )
    return sps.butter(spec.order, [spec.low_hz, spec.high_hz], btype="bandpass", fs=sampling_rate)


def _gust_irlen(b: np.ndarray, a: np.ndarray, n_samples: int) -> int | None:
    """Impulse-response length for Gustafsson filtering (decay below 1e-9)."""
    _, poles, _ = sps.tf2zpk(b, a)
    slowest = np.max(np.abs(poles))
    if slowest >= 1.0:  # pragma: no cover - Butterworth designs are stable
        return None
    irlen = int(np.ceil(np.log(1e-9) / np.log(slowest)))
    return None if irlen >= n_samples else irlen


def _zero_phase(b: np.ndarray, a: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Forward-backward filtering with transient-minimizing initial conditions."""
    irlen = _gust_irlen(b, a, samples.shape[-1])
    return sps.filtfilt(b, a, samples, axis=-1, method="gust", irlen=irlen)


def bandpass_filter(recording: EegRecording, spec: FilterSpec | None = None) -> EegRecording:
    """Zero-phase Butterworth bandpass, same shape and sampling rate.

    The filter runs forward then backward (with initial conditions chosen to
    minimize startup effects), so phase distortion cancels.  The first and
    last ``spec.transient_samples`` output samples are still flagged as
    transient and should be excluded from amplitude measurements.
    """
    spec = spec or FilterSpec()
    b, a = _design_ba(spec, recording.sampling_rate)
    min_len = max(3 * max(len(a), len(b)), 3 * spec.order) + 1
    if recording.n_samples < min_len:
        raise RecordingTooShortError(
            f"recording has {recording.n_samples} samples; "
            f"need at least {min_len} for stable filtering"
        )
    filtered = _zero_phase(b, a, recording.samples)
    return recording.with_samples(filtered)


def filter_magnitude_response(
    spec: FilterSpec, sampling_rate: float, frequencies_hz: np.ndarray
) -> np.ndarray:
    """|H(f)| of the *combined* forward-backward filter at the given frequencies."""
    b, a = _design_ba(spec, sampling_rate)
    _, h = sps.freqz(b, a, worN=np.asarray(frequencies_hz, dtype=np.float64), fs=sampling_rate)
    return np.abs(h) ** 2  # forward-backward squares the single-pass response


def resample(recording: EegRecording, target_rate: float) -> EegRecording:
    """Resample by linear interpolation to ``round(n * target / original)`` samples.

    Downsampling is preceded by a zero-phase Butterworth anti-alias low-pass
    at 0.45 x target rate.  Upsampling interpolates directly.
    """
    if target_rate <= 0:
        raise FilterDesignError("target_rate must be > 0")
    original_rate = recording.sampling_rate
    if target_rate == original_rate:
        return recording.with_samples(recording.samples.copy())
    samples = recording.samples
    if target_rate < original_rate:
        cutoff = 0.45 * target_rate
        b, a = sps.butter(8, cutoff, btype="lowpass", fs=original_rate)
        if recording.n_samples <= 3 * max(len(a), len(b)):
            raise RecordingTooShortError(
                f"recording too short ({recording.n_samples} samples) for anti-alias filtering"
            )
        samples = _zero_phase(b, a, samples)
    n_new = int(round(recording.n_samples * target_rate / original_rate))
    old_t = np.arange(recording.n_samples) / original_rate
    new_t = np.arange(n_new) / target_rate
    resampled = np.empty((recording.n_channels, n_new))
    for ch in range(recording.n_channels):
        resampled[ch] = np.interp(new_t, old_t, samples[ch])
    return recording.with_samples(resampled, sampling_rate=target_rate)


def welch_psd(
    recording: EegRecording, segment_length: int, overlap_fraction: float = 0.5
) -> PsdEstimate:
    """Welch PSD: Hann-windowed, overlapped, mean-averaged periodogram.

    Each segment has its mean removed before windowing (raw DC would leak
    through the Hann window into the delta band); the squared global mean of
    each channel is restored as an impulse at the 0 Hz bin, weighted so the
    trapezoidal integral of the PSD preserves total signal power.
    """
    if not 0 <= overlap_fraction < 1:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    if segment_length < 8:
        raise ValueError("segment_length must be >= 8 samples")
    if segment_length > recording.n_samples:
        raise RecordingTooShortError(
            f"segment_length {segment_length} exceeds recording length {recording.n_samples}"
        )
    noverlap = int(overlap_fraction * segment_length)
    freqs, power = sps.welch(
        recording.samples,
        fs=recording.sampling_rate,
        window="hann",
        nperseg=segment_length,
        noverlap=noverlap,
        detrend="constant",
        scaling="density",
        average="mean",
        axis=1,
    )
    df = recording.sampling_rate / segment_length
    channel_means = recording.samples.mean(axis=1)
    power[:, 0] += 2.0 * channel_means**2 / df  # trapezoid end weight is df/2
    power = np.maximum(power, 0.0)
    return PsdEstimate(
        recording.channel_names, freqs, power, segment_length, overlap_fraction
    )


def band_power(psd: PsdEstimate, band: BandDefinition) -> np.ndarray:
    """Trapezoidal integral of the PSD over [band.low_hz, band.high_hz] per channel.

    PSD values at the exact band edges are linearly interpolated, which makes
    band powers exactly additive over adjacent bands.  The 0 Hz bin may carry
    the restored DC point mass, so bands starting above 0 Hz integrate the
    density part (bins > 0 Hz) only; a band with low edge 0 includes it.
    """
    freqs = psd.frequencies_hz
    if band.low_hz < freqs[0] or band.high_hz > freqs[-1]:
        raise BandRangeError(
            f"band {band.name} ({band.low_hz}-{band.high_hz} Hz) outside "
            f"spectrum 0-{freqs[-1]} Hz"
        )
    start = 1 if band.low_hz > 0.0 else 0  # skip the DC impulse bin
    grid_freqs = freqs[start:]
    inner = (grid_freqs > band.low_hz) & (grid_freqs < band.high_hz)
    grid = np.concatenate(([band.low_hz], grid_freqs[inner], [band.high_hz]))
    powers = np.empty(psd.power.shape[0])
    for ch in range(psd.power.shape[0]):
        density = psd.power[ch][start:]
        edges = np.interp([band.low_hz, band.high_hz], grid_freqs, density)
        values = np.concatenate(([edges[0]], density[inner], [edges[1]]))
        powers[ch] = _trapezoid(values, grid)
    return powers


def band_power_table(psd: PsdEstimate, bands=EEG_BANDS) -> dict[str, np.ndarray]:
    """Band power per channel for each named band."""
    return {band.name: band_power(psd, band) for band in bands}
