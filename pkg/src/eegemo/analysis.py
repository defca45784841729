"""Statistical characterization of the feature space.

Pearson correlations, per-feature Welch t-tests with one-vs-rest
significance counting, and an exact (all-pairs) t-SNE embedding for 2-D
visualization.  The Student-t tail probability is computed here from a
continued-fraction evaluation of the regularized incomplete beta function,
so the numeric contract is pinned by this module rather than an external
stats library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import LABEL_NAMES, LabeledDataset
from .errors import DegenerateVarianceError, InfeasiblePerplexityError

DEFAULT_ALPHA = 0.05


# --- Student-t tail probability ----------------------------------------------

_BETACF_MAX_ITER = 300
_BETACF_EPS = 3e-16
_FPMIN = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), accurate to near machine precision for a, b > 0, x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided tail probability of the Student-t distribution."""
    if df <= 0:
        raise ValueError("degrees of freedom must be > 0")
    if not math.isfinite(t):
        return 0.0
    x = df / (df + t * t)
    return min(1.0, regularized_incomplete_beta(df / 2.0, 0.5, x))


# --- correlation --------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson correlations between feature columns.

    Constant columns carry a 0 sentinel (flagged) instead of NaN.
    """

    feature_names: tuple[str, ...]
    values: np.ndarray  # symmetric, in [-1, 1]
    constant_features: tuple[str, ...]

    artifact_kind = "correlation"

    def payload_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "values": self.values.tolist(),
            "constant_features": list(self.constant_features),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "CorrelationMatrix":
        return cls(
            tuple(payload["feature_names"]),
            np.asarray(payload["values"], dtype=np.float64),
            tuple(payload["constant_features"]),
        )


def correlation_matrix(features: np.ndarray, feature_names=None) -> CorrelationMatrix:
    """Pearson correlation per feature pair; needs at least 2 rows."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("correlation needs a 2-D matrix with >= 2 rows")
    n, k = x.shape
    if feature_names is None:
        feature_names = tuple(f"f{j + 1}" for j in range(k))
    centered = x - x.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    constant = norms == 0.0
    safe = np.where(constant, 1.0, norms)
    corr = (centered.T @ centered) / np.outer(safe, safe)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    idx = np.where(~constant)[0]
    corr[idx, idx] = 1.0
    return CorrelationMatrix(
        tuple(feature_names),
        corr,
        tuple(name for name, flag in zip(feature_names, constant) if flag),
    )


# --- Welch t-test and significance counting -----------------------------------


@dataclass(frozen=True)
class TTestResult:
    feature_name: str
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    significant: bool


def welch_t_test(
    sample_a, sample_b, alpha: float = DEFAULT_ALPHA, feature_name: str = ""
) -> TTestResult:
    """Welch's unequal-variance t-test with Welch-Satterthwaite df, two-sided p.

    Raises ``DegenerateVarianceError`` when both samples are constant.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each sample needs >= 2 values")
    va, vb = a.var(ddof=1), b.var(ddof=1)
    if va == 0.0 and vb == 0.0:
        raise DegenerateVarianceError(
            f"both samples of {feature_name or 'test'} have zero variance"
        )
    sa, sb = va / a.size, vb / b.size
    se = math.sqrt(sa + sb)
    t = (a.mean() - b.mean()) / se
    df = (sa + sb) ** 2 / (sa**2 / (a.size - 1) + sb**2 / (b.size - 1))
    p = student_t_two_sided_p(t, df)
    return TTestResult(feature_name, float(t), float(df), float(p), bool(p < alpha))


@dataclass(frozen=True)
class SignificanceSummary:
    """Per-emotion counts of significant vs non-significant features.

    Each class is tested one-vs-rest for every feature; the full t-test table
    rides along in the same artifact.
    """

    alpha: float
    counts: dict[int, tuple[int, int]]  # label -> (significant, non_significant)
    tests: tuple[tuple[int, TTestResult], ...]  # (label, result) per feature

    artifact_kind = "significance"

    def payload_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "label_names": {str(k): v for k, v in LABEL_NAMES.items()},
            "classes": [
                {
                    "label": label,
                    "name": LABEL_NAMES[label],
                    "significant": s,
                    "non_significant": ns,
                }
                for label, (s, ns) in sorted(self.counts.items())
            ],
            "tests": [
                {
                    "feature": r.feature_name,
                    "label": label,
                    "t": r.t_statistic,
                    "df": r.degrees_of_freedom,
                    "p": r.p_value,
                    "significant": r.significant,
                }
                for label, r in self.tests
            ],
        }


def significance_summary(dataset: LabeledDataset, alpha: float = DEFAULT_ALPHA) -> SignificanceSummary:
    """One-vs-rest Welch t-tests per feature per emotion class.

    Features with zero variance in both groups count as non-significant.
    """
    counts: dict[int, tuple[int, int]] = {}
    tests: list[tuple[int, TTestResult]] = []
    labels = dataset.labels
    for label in sorted(LABEL_NAMES):
        in_class = labels == label
        if in_class.sum() < 2 or (~in_class).sum() < 2:
            raise ValueError(f"class {LABEL_NAMES[label]} needs >= 2 samples on each side")
        significant = 0
        for j, name in enumerate(dataset.feature_names):
            col = dataset.features[:, j]
            try:
                result = welch_t_test(col[in_class], col[~in_class], alpha, name)
            except DegenerateVarianceError:
                result = TTestResult(name, 0.0, float(in_class.sum() + (~in_class).sum() - 2), 1.0, False)
            tests.append((label, result))
            significant += int(result.significant)
        counts[label] = (significant, dataset.n_features - significant)
    return SignificanceSummary(alpha, counts, tuple(tests))


# --- exact t-SNE ---------------------------------------------------------------


@dataclass(frozen=True)
class Embedding2D:
    """2-D t-SNE coordinates with the achieved KL divergence."""

    coordinates: np.ndarray  # (n_samples, 2)
    labels: np.ndarray | None
    final_kl: float
    kl_after_exaggeration: float
    perplexity: float

    artifact_kind = "embedding"

    def payload_dict(self) -> dict:
        return {
            "coordinates": self.coordinates.tolist(),
            "labels": None if self.labels is None else [int(v) for v in self.labels],
            "label_names": {str(k): v for k, v in LABEL_NAMES.items()},
            "final_kl": float(self.final_kl),
            "perplexity": float(self.perplexity),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Embedding2D":
        labels = payload.get("labels")
        return cls(
            np.asarray(payload["coordinates"], dtype=np.float64),
            None if labels is None else np.asarray(labels, dtype=np.int64),
            float(payload["final_kl"]),
            float("nan"),
            float(payload["perplexity"]),
        )


def _row_affinities(d2_row: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """Conditional affinities and their Shannon entropy (bits) for one row."""
    shifted = -beta * (d2_row - d2_row.min())
    p = np.exp(shifted)
    total = max(p.sum(), _FPMIN)
    p = p / total
    nz = p[p > 0]
    entropy_bits = float(-(nz * np.log2(nz)).sum())
    return p, entropy_bits


def _calibrate_row(d2_row: np.ndarray, target_bits: float, tol: float = 1e-4, max_iter: int = 300):
    """Binary-search the Gaussian precision so row entropy hits the target."""
    beta, lo, hi = 1.0, 0.0, np.inf
    p, h = _row_affinities(d2_row, beta)
    for _ in range(max_iter):
        if abs(h - target_bits) <= tol:
            break
        if h > target_bits:  # too flat -> sharpen
            lo = beta
            beta = beta * 2.0 if hi == np.inf else (beta + hi) / 2.0
        else:
            hi = beta
            beta = (lo + beta) / 2.0
        p, h = _row_affinities(d2_row, beta)
    return p, h


def joint_affinities(features: np.ndarray, perplexity: float) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized joint P matrix plus the per-row achieved entropies (bits)."""
    x = np.asarray(features, dtype=np.float64)
    n = x.shape[0]
    sq = np.sum(x**2, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
    target_bits = math.log2(perplexity)
    cond = np.zeros((n, n))
    entropies = np.zeros(n)
    for i in range(n):
        row = np.delete(d2[i], i)
        p, h = _calibrate_row(row, target_bits)
        cond[i, np.arange(n) != i] = p
        entropies[i] = h
    joint = (cond + cond.T) / (2.0 * n)
    return joint, entropies


def _kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def tsne_embed(
    features: np.ndarray,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    labels=None,
    learning_rate: float = 200.0,
    early_exaggeration: float = 4.0,
    exaggeration_iters: int = 100,
    momentum_switch_iter: int = 250,
) -> Embedding2D:
    """Exact (all-pairs) t-SNE to 2-D, deterministic for a fixed seed.

    Per-row Gaussian bandwidths are binary-searched so the conditional
    entropy matches log2(perplexity); low-dimensional affinities use a
    Student-t kernel with one degree of freedom; optimization is gradient
    descent with momentum (0.5 then 0.8) and early exaggeration.
    """
    x = np.asarray(features, dtype=np.float64)
    n = x.shape[0]
    if n < 4:
        raise InfeasiblePerplexityError(f"t-SNE needs >= 4 samples, got {n}")
    if perplexity >= (n - 1) / 3.0:
        raise InfeasiblePerplexityError(
            f"perplexity {perplexity} infeasible for n={n}; need perplexity < (n-1)/3"
        )
    if perplexity < 1:
        raise InfeasiblePerplexityError("perplexity must be >= 1")
    p_joint, _ = joint_affinities(x, perplexity)
    p_joint = np.maximum(p_joint, 1e-12)
    p_joint /= p_joint.sum()

    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(y)
    kl_after_exaggeration = math.inf

    for it in range(iterations):
        sq = np.sum(y**2, axis=1)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0)
        num = 1.0 / (1.0 + d2)
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), 1e-12)
        if it == exaggeration_iters:
            kl_after_exaggeration = _kl_divergence(p_joint, q)
        p_eff = p_joint * early_exaggeration if it < exaggeration_iters else p_joint
        pq = (p_eff - q) * num
        grad = 4.0 * (pq.sum(axis=1)[:, None] * y - pq @ y)
        momentum = 0.5 if it < momentum_switch_iter else 0.8
        update = momentum * update - learning_rate * grad
        y = y + update
        y = y - y.mean(axis=0)

    sq = np.sum(y**2, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0)
    num = 1.0 / (1.0 + d2)
    np.fill_diagonal(num, 0.0)
    q = np.maximum(num / num.sum(), 1e-12)
    final_kl = _kl_divergence(p_joint, q)
    if kl_after_exaggeration is math.inf:
        kl_after_exaggeration = final_kl
    return Embedding2D(
        y,
        None if labels is None else np.asarray(labels, dtype=np.int64),
        final_kl,
        kl_after_exaggeration,
        float(perplexity),
    )


def subsample_stratified(labels, cap: int, seed: int) -> np.ndarray:
    """Seeded stratified row subsample of at most ``cap`` rows (sorted indices)."""
    labels = np.asarray(labels)
    n = labels.shape[0]
    if n <= cap:
        return np.arange(n)
    rng = np.random.default_rng(seed)
    classes = np.unique(labels)
    quotas = {}
    fractions = []
    total = 0
    for c in classes:
        exact = cap * np.sum(labels == c) / n
        quotas[c] = int(np.floor(exact))
        fractions.append((exact - quotas[c], c))
        total += quotas[c]
    # distribute the remainder by largest fractional part (ties: lower label)
    for _, c in sorted(fractions, key=lambda t: (-t[0], t[1]))[: cap - total]:
        quotas[c] += 1
    picked = []
    for c in classes:
        rows = np.where(labels == c)[0]
        picked.append(rng.choice(rows, size=min(quotas[c], rows.size), replace=False))
    return np.sort(np.concatenate(picked))
