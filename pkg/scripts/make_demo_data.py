#!/usr/bin/env python3
"""Generate demonstration data for the pipeline.

Synthesizes one raw EEG recording per emotional state (four Muse channels,
band-limited noise with emotion-dependent band weights), writes them as raw
CSVs, then runs the actual preprocessing + windowed feature extraction to
build one labeled feature CSV.  The result is a stand-in with the same file
shapes as the published feature dataset, handy for exercising the CLI and
the renderer end to end.

Usage:
    python scripts/make_demo_data.py --out data_demo --seconds 90 --seed 0
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from eegemo import dataio, dsp, featext

CHANNELS = ("TP9", "AF7", "AF8", "TP10")

# relative band weights per emotion: beta/gamma-heavy for negative arousal,
# alpha-dominant at rest, theta/alpha mix for positive
BAND_WEIGHTS = {
    "NEGATIVE": {"Delta": 0.8, "Theta": 0.7, "Alpha": 0.8, "Beta": 1.8, "Gamma": 1.2},
    "NEUTRAL": {"Delta": 1.0, "Theta": 0.8, "Alpha": 2.0, "Beta": 0.6, "Gamma": 0.3},
    "POSITIVE": {"Delta": 0.9, "Theta": 1.6, "Alpha": 1.4, "Beta": 0.9, "Gamma": 0.5},
}


def band_limited_noise(rng, band, n_samples, fs):
    white = rng.normal(0.0, 1.0, n_samples)
    rec = dataio.EegRecording(("x",), white[None, :], fs)
    spec = dsp.FilterSpec(band.low_hz, min(band.high_hz, 0.49 * fs), order=4)
    return dsp.bandpass_filter(rec, spec).samples[0]


def synthesize_recording(emotion, seconds, fs, rng):
    n = int(seconds * fs)
    channels = np.zeros((len(CHANNELS), n))
    weights = BAND_WEIGHTS[emotion]
    for ch in range(len(CHANNELS)):
        # per-channel gain differences mimic electrode placement
        gain = 1.0 + 0.15 * ch
        for band in dsp.EEG_BANDS:
            channels[ch] += gain * weights[band.name] * band_limited_noise(rng, band, n, fs)
        channels[ch] += 0.2 * rng.normal(0.0, 1.0, n)  # sensor noise
    return dataio.EegRecording(CHANNELS, 30.0 * channels, fs)  # ~microvolt scale


def write_raw_csv(recording, path):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(recording.channel_names)
        for i in range(recording.n_samples):
            writer.writerow([repr(float(v)) for v in recording.samples[:, i]])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("data_demo"))
    parser.add_argument("--seconds", type=float, default=90.0)
    parser.add_argument("--rate", type=float, default=150.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    plan = featext.WindowPlan(1.0, (0.0, 0.5))
    filter_spec = dsp.FilterSpec(0.5, 45.0, 4)

    all_rows = []
    all_labels = []
    feature_names = None
    for emotion in ("NEGATIVE", "NEUTRAL", "POSITIVE"):
        recording = synthesize_recording(emotion, args.seconds, args.rate, rng)
        raw_path = args.out / f"raw_{emotion.lower()}.csv"
        write_raw_csv(recording, raw_path)
        cleaned = dsp.bandpass_filter(recording, filter_spec)
        table = featext.extract_features(cleaned, plan)
        feature_names = table.feature_names
        all_rows.append(table.values)
        all_labels.extend([dataio.NAME_TO_LABEL[emotion]] * table.values.shape[0])
        print(f"{emotion}: {table.values.shape[0]} windows from {raw_path}")

    dataset = dataio.LabeledDataset(
        np.vstack(all_rows), feature_names, np.asarray(all_labels)
    )
    features_path = args.out / "demo_features.csv"
    dataio.write_dataset_csv(dataset, features_path)
    print(
        f"wrote {features_path}: {dataset.n_samples} samples x {dataset.n_features} "
        f"features, counts {dataset.class_counts()}"
    )


if __name__ == "__main__":
    main()
