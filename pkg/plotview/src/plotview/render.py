"""One renderer per artifact kind.

Every figure kind maps to exactly one function; unknown kinds fail loudly.
Class colors are fixed across figures so runs stay comparable:
NEGATIVE red (#d62728), NEUTRAL gray (#7f7f7f), POSITIVE green (#2ca02c).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import FIGURE_KINDS, ArtifactError, load_artifact

CLASS_COLORS = {"NEGATIVE": "#d62728", "NEUTRAL": "#7f7f7f", "POSITIVE": "#2ca02c"}
FALLBACK_COLOR = "#1f77b4"


@dataclass
class FigureJob:
    """One artifact to render: input path, output path, style options."""

    artifact_path: Path
    output_path: Path
    title: str | None = None
    color_map: str = "viridis"
    dpi: int = 120
    style: dict = field(default_factory=dict)


def _label_names(payload) -> dict[int, str]:
    raw = payload.get("label_names") or {}
    names = {int(k): str(v) for k, v in raw.items()}
    return names or {0: "NEGATIVE", 1: "NEUTRAL", 2: "POSITIVE"}


def _render_timeseries(payload, job):
    samples = np.asarray(payload["samples"], dtype=float)
    rate = float(payload["sampling_rate_hz"])
    names = payload["channel_names"]
    t = np.arange(samples.shape[1]) / rate
    fig, axes = plt.subplots(
        len(names), 1, sharex=True, figsize=(10, 1.6 * len(names) + 1), squeeze=False
    )
    for ax, name, row in zip(axes[:, 0], names, samples):
        ax.plot(t, row, linewidth=0.6)
        ax.set_ylabel(name)
    axes[-1, 0].set_xlabel("time (s)")
    fig.suptitle(job.title or "Cleaned EEG time series")
    return fig


def _render_psd(payload, job):
    freqs = np.asarray(payload["frequencies_hz"], dtype=float)
    power = np.asarray(payload["power"], dtype=float)
    fig, ax = plt.subplots(figsize=(9, 5))
    for name, row in zip(payload["channel_names"], power):
        ax.semilogy(freqs, np.maximum(row, 1e-300), label=name, linewidth=1.0)
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("power spectral density")
    ax.legend(loc="upper right", fontsize="small")
    ax.set_title(job.title or "Power spectral density")
    return fig


def _render_correlation(payload, job):
    values = np.asarray(payload["values"], dtype=float)
    names = payload["feature_names"]
    fig, ax = plt.subplots(figsize=(8, 7))
    image = ax.imshow(values, vmin=-1.0, vmax=1.0, cmap=job.style.get("cmap", "coolwarm"))
    fig.colorbar(image, ax=ax, label="correlation")
    if len(names) <= 30:
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=90, fontsize=6)
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names, fontsize=6)
    ax.set_title(job.title or "Feature correlation heatmap")
    return fig


def _render_embedding(payload, job):
    coords = np.asarray(payload["coordinates"], dtype=float)
    labels = payload.get("labels")
    names = _label_names(payload)
    fig, ax = plt.subplots(figsize=(7, 6))
    if labels is None:
        ax.scatter(coords[:, 0], coords[:, 1], s=12, color=FALLBACK_COLOR)
    else:
        labels = np.asarray(labels, dtype=int)
        for code in sorted(names):
            mask = labels == code
            if not mask.any():
                continue
            name = names[code]
            ax.scatter(
                coords[mask, 0],
                coords[mask, 1],
                s=14,
                label=name,
                color=CLASS_COLORS.get(name, FALLBACK_COLOR),
                alpha=0.8,
            )
        ax.legend(title="emotion")
    ax.set_xlabel("t-SNE 1")
    ax.set_ylabel("t-SNE 2")
    ax.set_title(job.title or "t-SNE embedding of feature windows")
    return fig


def _render_significance(payload, job):
    classes = payload["classes"]
    names = [c["name"] for c in classes]
    significant = [c["significant"] for c in classes]
    non_significant = [c["non_significant"] for c in classes]
    x = np.arange(len(classes))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.bar(x - width / 2, significant, width, label="significant", color="#2ca02c")
    ax.bar(x + width / 2, non_significant, width, label="not significant", color="#7f7f7f")
    for i, (s, ns) in enumerate(zip(significant, non_significant)):
        ax.text(i - width / 2, s, str(s), ha="center", va="bottom", fontsize=8)
        ax.text(i + width / 2, ns, str(ns), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(x)
    ax.set_xticklabels(names)
    ax.set_ylabel("feature count")
    ax.legend()
    alpha = payload.get("alpha")
    ax.set_title(job.title or f"Significant features per emotion (alpha = {alpha})")
    return fig


def _render_confusion(payload, job):
    counts = np.asarray(payload["counts"], dtype=int)
    names = _label_names(payload)
    ordered = [names[k] for k in sorted(names)]
    fig, ax = plt.subplots(figsize=(6, 5))
    image = ax.imshow(counts, cmap=job.style.get("cmap", "Blues"))
    fig.colorbar(image, ax=ax)
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            ax.text(
                j,
                i,
                str(counts[i, j]),
                ha="center",
                va="center",
                color="black" if counts[i, j] < counts.max() * 0.6 else "white",
            )
    ax.set_xticks(range(len(ordered)))
    ax.set_xticklabels(ordered, rotation=30)
    ax.set_yticks(range(len(ordered)))
    ax.set_yticklabels(ordered)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    model = payload.get("model") or ""
    ax.set_title(job.title or (f"Confusion matrix: {model}" if model else "Confusion matrix"))
    return fig


def _render_comparison(payload, job):
    rows = payload["rows"]
    fig, (ax_table, ax_bars) = plt.subplots(
        2, 1, figsize=(8, 6), gridspec_kw={"height_ratios": [1, 2]}
    )
    ax_table.axis("off")
    cells = [
        [r["model"], f"{100 * r['accuracy']:.1f}", f"{r['f1_weighted']:.3f}"] for r in rows
    ]
    table = ax_table.table(
        cellText=cells,
        colLabels=["Model", "Accuracy (%)", "F1-score"],
        loc="center",
        cellLoc="center",
    )
    table.scale(1.0, 1.4)
    x = np.arange(len(rows))
    ax_bars.bar(x - 0.2, [r["accuracy"] for r in rows], 0.4, label="accuracy")
    ax_bars.bar(x + 0.2, [r["f1_weighted"] for r in rows], 0.4, label="weighted F1")
    ax_bars.set_xticks(x)
    ax_bars.set_xticklabels([r["model"] for r in rows])
    ax_bars.set_ylim(0.0, 1.05)
    ax_bars.legend(loc="lower right")
    best = payload.get("best_model", "")
    fig.suptitle(job.title or (f"Model comparison (best: {best})" if best else "Model comparison"))
    return fig


_RENDERERS = {
    "timeseries": _render_timeseries,
    "psd": _render_psd,
    "correlation": _render_correlation,
    "embedding": _render_embedding,
    "significance": _render_significance,
    "confusion": _render_confusion,
    "comparison": _render_comparison,
}

assert set(_RENDERERS) == set(FIGURE_KINDS)


def render(job: FigureJob) -> Path:
    """Render one artifact to one image file; returns the output path."""
    kind, payload = load_artifact(job.artifact_path)
    renderer = _RENDERERS.get(kind)
    if renderer is None:
        raise ArtifactError(f"{job.artifact_path}: no renderer for artifact kind {kind!r}")
    fig = renderer(payload, job)
    job.output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(job.output_path, dpi=job.dpi, bbox_inches="tight")
    plt.close(fig)
    return job.output_path
