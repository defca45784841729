"""RBF-kernel support vector machine trained with sequential minimal optimization.

The binary trainer is Platt-style SMO: the outer loop alternates full passes
with passes over non-bound multipliers, the second multiplier is chosen to
maximize |E1 - E2|, and pair updates solve the two-variable dual
analytically.  The decision function is

    f(x) = sum_i alpha_i y_i K(x_i, x) + b,    K(u, v) = exp(-gamma ||u - v||^2)

with predicted side sgn(f), where sgn(0) = +1.  Three one-vs-one binary
models vote to produce the three-class label.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError

CLASS_PAIRS = ((0, 1), (0, 2), (1, 2))


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * squared euclidean distance), pairwise rows of a vs rows of b."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    sq = (
        np.sum(a**2, axis=1)[:, None]
        + np.sum(b**2, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def scale_gamma(features: np.ndarray) -> float:
    """Default kernel width: 1 / (n_features * mean per-feature variance)."""
    x = np.asarray(features, dtype=np.float64)
    mean_var = float(x.var(axis=0, ddof=1).mean()) if x.shape[0] > 1 else 0.0
    if mean_var <= 0:
        return 1.0 / x.shape[1]
    return 1.0 / (x.shape[1] * mean_var)


@dataclass(frozen=True)
class SvmBinaryModel:
    """Trained binary SVM; only rows with alpha > 0 are stored."""

    support_vectors: np.ndarray
    support_labels: np.ndarray  # in {-1, +1}
    alphas: np.ndarray  # in [0, C]
    bias: float
    gamma: float
    C: float
    objective_history: tuple[float, ...] = ()

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def decision_function(self, features) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=np.float64))
        if x.shape[1] != self.n_features:
            raise DimensionMismatchError(
                f"input has {x.shape[1]} features, model expects {self.n_features}"
            )
        k = rbf_kernel(x, self.support_vectors, self.gamma)
        return k @ (self.alphas * self.support_labels) + self.bias


def _dual_objective(alphas: np.ndarray, y: np.ndarray, kernel: np.ndarray) -> float:
    ay = alphas * y
    return float(alphas.sum() - 0.5 * ay @ kernel @ ay)


class _SmoState:
    """Mutable optimization state for one binary problem."""

    def __init__(self, x, y, C, gamma, tol, track_objective):
        self.x = x
        self.y = y
        self.C = C
        self.gamma = gamma
        self.tol = tol
        # minimum relative pair move; coarse first (Platt's 1e-3), tightened
        # at the end if any KKT violation survives the coarse phase
        self.step_eps = 1e-3
        self.n = x.shape[0]
        self.kernel = rbf_kernel(x, x, gamma)
        self.alphas = np.zeros(self.n)
        self.bias = 0.0
        self.errors = -y.astype(np.float64)  # f(x) - y with all alphas 0, b 0
        self.track_objective = track_objective
        self.objective_history: list[float] = []

    def refresh_errors(self):
        f = self.kernel @ (self.alphas * self.y) + self.bias
        self.errors = f - self.y

    def take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alphas[i1], self.alphas[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1 + a2 - self.C), min(self.C, a1 + a2)
        else:
            lo, hi = max(0.0, a2 - a1), min(self.C, self.C + a2 - a1)
        if lo >= hi:
            return False
        k11 = self.kernel[i1, i1]
        k12 = self.kernel[i1, i2]
        k22 = self.kernel[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(hi, max(lo, a2_new))
        else:
            # degenerate curvature: the two-variable dual is linear along the
            # constraint, so evaluate it at both clip ends and take the larger
            v1 = (e1 + y1) - self.bias - y1 * a1 * k11 - y2 * a2 * k12
            v2 = (e2 + y2) - self.bias - y1 * a1 * k12 - y2 * a2 * k22

            def pair_dual(c2):
                c1 = a1 + s * (a2 - c2)
                return (
                    c1
                    + c2
                    - 0.5 * (c1**2 * k11 + c2**2 * k22)
                    - s * c1 * c2 * k12
                    - c1 * y1 * v1
                    - c2 * y2 * v2
                )

            obj_lo, obj_hi = pair_dual(lo), pair_dual(hi)
            if obj_lo > obj_hi + 1e-12:
                a2_new = lo
            elif obj_hi > obj_lo + 1e-12:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < self.step_eps * (a2_new + a2 + self.step_eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = self.bias - (e1 + d1 * k11 + d2 * k12)
        b2 = self.bias - (e2 + d1 * k12 + d2 * k22)
        if 0.0 < a1_new < self.C:
            new_bias = b1
        elif 0.0 < a2_new < self.C:
            new_bias = b2
        else:
            new_bias = (b1 + b2) / 2.0

        self.errors += d1 * self.kernel[i1] + d2 * self.kernel[i2] + (new_bias - self.bias)
        self.alphas[i1] = a1_new
        self.alphas[i2] = a2_new
        self.bias = new_bias
        if self.track_objective:
            self.objective_history.append(_dual_objective(self.alphas, self.y, self.kernel))
        return True

    def violates_kkt(self, i: int) -> bool:
        r = self.errors[i] * self.y[i]  # y_i f(x_i) - 1
        return (r < -self.tol and self.alphas[i] < self.C) or (
            r > self.tol and self.alphas[i] > 0.0
        )

    def examine(self, i2: int) -> bool:
        if not self.violates_kkt(i2):
            return False
        non_bound = np.where((self.alphas > 0.0) & (self.alphas < self.C))[0]
        if non_bound.size > 1:
            gaps = np.abs(self.errors[non_bound] - self.errors[i2])
            if self.take_step(int(non_bound[np.argmax(gaps)]), i2):
                return True
        # deterministic fallbacks: sweep non-bound, then everything
        for i1 in np.roll(non_bound, -(i2 % max(non_bound.size, 1))):
            if self.take_step(int(i1), i2):
                return True
        for i1 in np.roll(np.arange(self.n), -(i2 + 1)):
            if self.take_step(int(i1), i2):
                return True
        return False


def train_svm_binary(
    features,
    labels,
    C: float = 1.0,
    gamma: float | None = None,
    tol: float = 1e-3,
    max_passes: int = 10,
    track_objective: bool = False,
) -> SvmBinaryModel:
    """SMO on one two-class problem; ``labels`` must be -1/+1.

    Terminates when a full sweep (with freshly recomputed errors) finds no
    KKT violation beyond ``tol``; ``max_passes`` caps the number of full
    sweeps.  With ``track_objective`` the dual objective is recorded after
    every accepted pair update.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if set(np.unique(y)) != {-1.0, 1.0}:
        raise ValueError("binary SVM needs both labels -1 and +1 present")
    if gamma is None:
        gamma = scale_gamma(x)
    state = _SmoState(x, y, float(C), float(gamma), float(tol), track_objective)

    full_passes = 0
    examine_all = True
    num_changed = 1
    while num_changed > 0 or examine_all:
        num_changed = 0
        if examine_all:
            full_passes += 1
            if full_passes > max_passes:
                break
            state.refresh_errors()  # guard the termination check against cache drift
            for i in range(state.n):
                num_changed += state.examine(i)
            if num_changed == 0 and state.step_eps > 1e-12:
                # coarse phase converged; polish any residual KKT violations
                # with micro-steps allowed
                state.step_eps = 1e-12
                num_changed = 1  # force one more sweep
            examine_all = False
        else:
            for i in np.where((state.alphas > 0.0) & (state.alphas < state.C))[0]:
                num_changed += state.examine(int(i))
            if num_changed == 0:
                examine_all = True

    support = state.alphas > 0.0
    return SvmBinaryModel(
        support_vectors=x[support].copy(),
        support_labels=y[support].copy(),
        alphas=state.alphas[support].copy(),
        bias=float(state.bias),
        gamma=float(gamma),
        C=float(C),
        objective_history=tuple(state.objective_history),
    )


@dataclass(frozen=True)
class SvmEnsemble:
    """One-vs-one ensemble: binary models for class pairs (0,1), (0,2), (1,2).

    For the pair (a, b) the lower class a maps to +1, so sgn(f) >= 0 votes a.
    """

    models: tuple[SvmBinaryModel, ...]
    pairs: tuple[tuple[int, int], ...] = CLASS_PAIRS

    @property
    def n_features(self) -> int:
        return self.models[0].n_features


def train_svm_ensemble(
    features,
    labels,
    C: float = 1.0,
    gamma: float | None = None,
    tol: float = 1e-3,
    max_passes: int = 10,
    track_objective: bool = False,
) -> SvmEnsemble:
    """Train the three pairwise models on the standardized training matrix.

    The scale-heuristic gamma is computed once on the full training matrix
    and shared by all pairs.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if gamma is None:
        gamma = scale_gamma(x)
    models = []
    for a, b in CLASS_PAIRS:
        mask = (y == a) | (y == b)
        pair_y = np.where(y[mask] == a, 1.0, -1.0)
        models.append(
            train_svm_binary(x[mask], pair_y, C, gamma, tol, max_passes, track_objective)
        )
    return SvmEnsemble(tuple(models))


def predict_svm(ensemble: SvmEnsemble, features) -> np.ndarray:
    """Majority vote over the pairwise models.

    A three-way circular tie is broken by the vote with the largest |f|
    margin, then by the lowest class index.
    """
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    margins = np.stack([m.decision_function(x) for m in ensemble.models], axis=1)
    votes = np.empty_like(margins, dtype=np.int64)
    for j, (a, b) in enumerate(ensemble.pairs):
        votes[:, j] = np.where(margins[:, j] >= 0.0, a, b)  # sgn(0) = +1 -> class a
    out = np.empty(x.shape[0], dtype=np.int64)
    for i in range(x.shape[0]):
        counts = np.bincount(votes[i], minlength=3)
        if counts.max() >= 2:
            out[i] = int(np.argmax(counts))
        else:
            strength = np.abs(margins[i])
            best = strength.max()
            contenders = votes[i][strength == best]
            out[i] = int(contenders.min())
    return out
