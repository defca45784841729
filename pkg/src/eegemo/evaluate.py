"""Shared evaluation protocol: one split, one metric set, three models.

Every model in a comparison trains on identical rows of one seeded
stratified split and is scored on identical test rows.  Standardization is
fitted on training rows only; the random forest trains on raw features
(trees are insensitive to feature scale), the other two on standardized
features.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from .dataio import LABEL_NAMES, LabeledDataset
from .errors import EmptyEvaluationError, SplitError
from .featext import apply_standardizer, fit_standardizer
from .models import (
    predict_logreg,
    predict_rf,
    predict_svm,
    train_logreg,
    train_rf,
    train_svm_ensemble,
)

MODEL_DISPLAY_NAMES = {
    "lr": "Logistic regression",
    "svm": "SVM",
    "rf": "Random Forest",
}
MODEL_ORDER = ("lr", "svm", "rf")


@dataclass(frozen=True)
class SplitIndices:
    """Disjoint train/test row indices from a seeded stratified shuffle."""

    train_rows: np.ndarray
    test_rows: np.ndarray
    seed: int
    test_fraction: float

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.asarray(self.train_rows, dtype=np.int64).tobytes())
        h.update(b"|")
        h.update(np.asarray(self.test_rows, dtype=np.int64).tobytes())
        return h.hexdigest()


def stratified_split(dataset: LabeledDataset, test_fraction: float = 0.3, seed: int = 42) -> SplitIndices:
    """Per-class seeded shuffle, then proportional allocation to the test side.

    Every class must be large enough to land at least one row in each
    partition.
    """
    if not 0.0 < test_fraction < 1.0:
        raise SplitError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    labels = dataset.labels
    train_parts, test_parts = [], []
    for label in sorted(LABEL_NAMES):
        rows = np.where(labels == label)[0]
        if rows.size < 2:
            raise SplitError(
                f"class {LABEL_NAMES[label]} has {rows.size} samples; needs >= 2 "
                "to appear in both partitions"
            )
        shuffled = rows.copy()
        rng.shuffle(shuffled)
        n_test = int(round(test_fraction * rows.size))
        n_test = min(max(n_test, 1), rows.size - 1)
        test_parts.append(shuffled[:n_test])
        train_parts.append(shuffled[n_test:])
    return SplitIndices(
        np.sort(np.concatenate(train_parts)),
        np.sort(np.concatenate(test_parts)),
        seed,
        test_fraction,
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """3x3 counts, rows = true class, columns = predicted class."""

    counts: np.ndarray
    model: str = ""

    artifact_kind = "confusion"

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (3, 3) or (counts < 0).any():
            raise ValueError("confusion matrix must be 3x3 with non-negative counts")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def payload_dict(self) -> dict:
        return {
            "counts": self.counts.tolist(),
            "label_names": {str(k): v for k, v in LABEL_NAMES.items()},
            "model": self.model,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "ConfusionMatrix":
        return cls(np.asarray(payload["counts"], dtype=np.int64), payload.get("model", ""))


def confusion_matrix(y_true, y_pred, model: str = "") -> ConfusionMatrix:
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape[0]} true vs {p.shape[0]} predicted")
    if t.size and (t.min() < 0 or t.max() > 2 or p.min() < 0 or p.max() > 2):
        raise ValueError("labels must be in {0, 1, 2}")
    counts = np.bincount(3 * t + p, minlength=9).reshape(3, 3)
    return ConfusionMatrix(counts, model)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    per_class: tuple[ClassMetrics, ...]
    macro_f1: float
    weighted_f1: float
    undefined_ratio_count: int  # 0/0 precision or recall occurrences, defined as 0


def classification_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, per-class precision/recall/F1, macro and support-weighted F1.

    A 0/0 precision or recall is defined as 0 and counted in
    ``undefined_ratio_count``.
    """
    counts = cm.counts
    total = cm.total
    if total == 0:
        raise EmptyEvaluationError("cannot compute metrics for an empty evaluation")
    accuracy = float(np.trace(counts)) / total
    per_class = []
    undefined = 0
    for c in range(3):
        tp = counts[c, c]
        predicted = counts[:, c].sum()
        support = counts[c, :].sum()
        if predicted == 0:
            precision, undefined = 0.0, undefined + 1
        else:
            precision = tp / predicted
        if support == 0:
            recall, undefined = 0.0, undefined + 1
        else:
            recall = tp / support
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
        per_class.append(ClassMetrics(float(precision), float(recall), float(f1), int(support)))
    macro = float(np.mean([m.f1 for m in per_class]))
    if len({m.support for m in per_class}) == 1:
        # equal supports: the weighted mean is the unweighted mean by
        # definition; reuse it so the identity holds bit-exactly
        weighted = macro
    else:
        weighted = float(sum(m.f1 * m.support for m in per_class) / total)
    return MetricsReport(accuracy, tuple(per_class), macro, weighted, undefined)


@dataclass(frozen=True)
class ModelConfigs:
    """Hyperparameters for one comparison run; ``models`` picks which rows appear."""

    models: tuple[str, ...] = MODEL_ORDER
    logreg_l2: float = 1e-3
    logreg_learning_rate: float = 0.1
    logreg_max_epochs: int = 500
    logreg_tolerance: float = 1e-5
    svm_c: float = 1.0
    svm_gamma: float | None = None  # None -> scale heuristic
    svm_tol: float = 1e-3
    svm_max_passes: int = 10
    rf_trees: int = 100
    rf_mtry: int | None = None  # None -> sqrt(n_features)
    rf_max_depth: int | None = None
    rf_min_leaf: int = 1
    rf_seed: int = 0
    rf_jobs: int = 1

    def __post_init__(self):
        unknown = set(self.models) - set(MODEL_ORDER)
        if unknown:
            raise ValueError(f"unknown model keys: {sorted(unknown)}")
        if not self.models:
            raise ValueError("at least one model must be configured")


@dataclass(frozen=True)
class ModelEvaluation:
    key: str  # lr | svm | rf
    display_name: str
    accuracy: float
    metrics: MetricsReport
    confusion: ConfusionMatrix
    training_seconds: float


@dataclass(frozen=True)
class EvaluationReport:
    """Per-model comparison rows plus the provenance of the shared split.

    ``training_seconds`` values are measurements and are deliberately left
    out of the JSON payload so identical runs produce byte-identical
    artifacts; the CLI records them in the run manifest instead.
    """

    rows: tuple[ModelEvaluation, ...]
    best_model: str
    ranking: tuple[str, ...]
    provenance: dict = field(default_factory=dict)

    artifact_kind = "comparison"

    def row(self, key: str) -> ModelEvaluation:
        for r in self.rows:
            if r.key == key:
                return r
        raise KeyError(key)

    def payload_dict(self) -> dict:
        return {
            "rows": [
                {
                    "model": r.display_name,
                    "key": r.key,
                    "accuracy": r.accuracy,
                    "f1_weighted": r.metrics.weighted_f1,
                    "f1_macro": r.metrics.macro_f1,
                    "per_class": [
                        {
                            "label": c,
                            "name": LABEL_NAMES[c],
                            "precision": m.precision,
                            "recall": m.recall,
                            "f1": m.f1,
                            "support": m.support,
                        }
                        for c, m in enumerate(r.metrics.per_class)
                    ],
                    "confusion": r.confusion.counts.tolist(),
                }
                for r in self.rows
            ],
            "best_model": self.best_model,
            "ranking": list(self.ranking),
            "provenance": self.provenance,
        }


def train_one_model(key: str, configs: ModelConfigs, x_train_std, x_train_raw, y_train):
    """Train one configured model on the prepared matrices; returns the model."""
    if key == "lr":
        return train_logreg(
            x_train_std,
            y_train,
            l2_lambda=configs.logreg_l2,
            learning_rate=configs.logreg_learning_rate,
            max_epochs=configs.logreg_max_epochs,
            tolerance=configs.logreg_tolerance,
        )
    if key == "svm":
        return train_svm_ensemble(
            x_train_std,
            y_train,
            C=configs.svm_c,
            gamma=configs.svm_gamma,
            tol=configs.svm_tol,
            max_passes=configs.svm_max_passes,
        )
    if key == "rf":
        return train_rf(
            x_train_raw,
            y_train,
            n_trees=configs.rf_trees,
            mtry=configs.rf_mtry,
            max_depth=configs.rf_max_depth,
            min_leaf=configs.rf_min_leaf,
            seed=configs.rf_seed,
            n_jobs=configs.rf_jobs,
        )
    raise ValueError(f"unknown model key {key!r}")


def predict_with(key: str, model, features) -> np.ndarray:
    if key == "lr":
        return predict_logreg(model, features)
    if key == "svm":
        return predict_svm(model, features)
    if key == "rf":
        return predict_rf(model, features)
    raise ValueError(f"unknown model key {key!r}")


def compare_models(
    dataset: LabeledDataset,
    split: SplitIndices,
    configs: ModelConfigs | None = None,
) -> EvaluationReport:
    """Train the configured models on one shared split and score the test rows."""
    configs = configs or ModelConfigs()
    x_train_raw = dataset.features[split.train_rows]
    x_test_raw = dataset.features[split.test_rows]
    y_train = dataset.labels[split.train_rows]
    y_test = dataset.labels[split.test_rows]
    standardizer = fit_standardizer(x_train_raw)
    x_train_std = apply_standardizer(standardizer, x_train_raw)
    x_test_std = apply_standardizer(standardizer, x_test_raw)

    rows = []
    for key in MODEL_ORDER:
        if key not in configs.models:
            continue
        started = time.perf_counter()
        model = train_one_model(key, configs, x_train_std, x_train_raw, y_train)
        elapsed = time.perf_counter() - started
        x_test = x_test_raw if key == "rf" else x_test_std
        predictions = predict_with(key, model, x_test)
        cm = confusion_matrix(y_test, predictions, model=MODEL_DISPLAY_NAMES[key])
        metrics = classification_metrics(cm)
        rows.append(
            ModelEvaluation(
                key, MODEL_DISPLAY_NAMES[key], metrics.accuracy, metrics, cm, elapsed
            )
        )

    ranked = sorted(rows, key=lambda r: (-r.accuracy, -r.metrics.weighted_f1, r.key))
    provenance = {
        "seed": split.seed,
        "test_fraction": split.test_fraction,
        "n_train": int(split.train_rows.size),
        "n_test": int(split.test_rows.size),
        "split_digest": split.digest(),
    }
    return EvaluationReport(
        tuple(rows),
        best_model=ranked[0].display_name,
        ranking=tuple(r.display_name for r in ranked),
        provenance=provenance,
    )


GRID_C = (0.5, 1.0, 2.0, 4.0)
GRID_GAMMA_FACTORS = (0.25, 1.0, 4.0)


def grid_search_svm(x_train_std, y_train, configs: ModelConfigs, seed: int):
    """Small C x gamma grid, scored on a seeded inner 80/20 stratified split.

    Returns (best_C, best_gamma, validation_accuracy).  Deterministic for a
    fixed seed; gamma candidates are multiples of the scale heuristic.
    """
    from .models import scale_gamma, train_svm_ensemble

    x = np.asarray(x_train_std, dtype=np.float64)
    y = np.asarray(y_train, dtype=np.int64)
    inner = stratified_split(
        LabeledDataset(x, tuple(f"g{i}" for i in range(x.shape[1])), y),
        test_fraction=0.2,
        seed=seed + 1,
    )
    x_fit, y_fit = x[inner.train_rows], y[inner.train_rows]
    x_val, y_val = x[inner.test_rows], y[inner.test_rows]
    base_gamma = scale_gamma(x_fit)
    best = None
    for c in GRID_C:
        for factor in GRID_GAMMA_FACTORS:
            gamma = base_gamma * factor
            model = train_svm_ensemble(
                x_fit, y_fit, C=c, gamma=gamma, tol=configs.svm_tol, max_passes=configs.svm_max_passes
            )
            accuracy = float(np.mean(predict_with("svm", model, x_val) == y_val))
            if best is None or accuracy > best[2]:
                best = (c, gamma, accuracy)
    return best


def format_comparison_table(report: EvaluationReport) -> str:
    """Plain-text comparison table (Model, Accuracy %, F1-score)."""
    lines = [
        f"{'Model':<22} {'Accuracy (%)':>12} {'F1-score':>10}",
        "-" * 46,
    ]
    for r in report.rows:
        lines.append(
            f"{r.display_name:<22} {100 * r.accuracy:>12.1f} {r.metrics.weighted_f1:>10.3f}"
        )
    if len(report.rows) > 1:
        lines.append("-" * 46)
        lines.append(f"best: {report.best_model} (ranking: {' > '.join(report.ranking)})")
    return "\n".join(lines)
