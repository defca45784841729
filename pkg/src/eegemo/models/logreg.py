"""Multinomial logistic regression trained by full-batch gradient descent.

The probability map is a softmax over per-class linear scores; the binary
special case reduces to the logistic sigmoid, which is exposed separately.
L2 regularization (weights only, not biases) stabilizes the fit on
correlated features.  Training is deterministic: zero initialization plus a
step-halving line search that keeps the loss monotonically non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError, TrainingDivergedError

N_CLASSES = 3


def sigmoid(x):
    """Numerically stable logistic function 1 / (1 + exp(-x))."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    if out.ndim == 0:
        return float(out)
    return out


def _softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_gradient(weights, biases, features, labels, l2_lambda):
    """Mean cross-entropy + (lambda/2)||W||^2 and its analytic gradient."""
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    n = x.shape[0]
    probs = _softmax(x @ weights.T + biases)
    eps = 1e-300
    data_loss = -np.log(np.maximum(probs[np.arange(n), y], eps)).mean()
    loss = data_loss + 0.5 * l2_lambda * float((weights**2).sum())
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    grad_w = delta.T @ x / n + l2_lambda * weights
    grad_b = delta.mean(axis=0)
    return loss, grad_w, grad_b


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray  # (n_classes, n_features)
    biases: np.ndarray  # (n_classes,)
    l2_lambda: float
    training_history: tuple[float, ...]  # per-epoch loss

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def train_logreg(
    features,
    labels,
    l2_lambda: float = 1e-3,
    learning_rate: float = 0.1,
    max_epochs: int = 500,
    tolerance: float = 1e-5,
) -> LogRegModel:
    """Fit the softmax model; stops when the gradient max-norm drops below
    ``tolerance`` or the epoch cap is reached.

    If a step would raise the loss (or make it non-finite) the step size is
    halved until it does not, so the recorded loss history never increases.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("training features must be a non-empty 2-D matrix")
    weights = np.zeros((N_CLASSES, x.shape[1]))
    biases = np.zeros(N_CLASSES)
    loss, grad_w, grad_b = loss_and_gradient(weights, biases, x, y, l2_lambda)
    if not np.isfinite(loss):
        raise TrainingDivergedError("initial loss is non-finite")
    history = [loss]
    lr = learning_rate
    for _ in range(max_epochs):
        grad_norm = max(np.abs(grad_w).max(), np.abs(grad_b).max())
        if grad_norm < tolerance:
            break
        while True:
            new_w = weights - lr * grad_w
            new_b = biases - lr * grad_b
            new_loss, new_gw, new_gb = loss_and_gradient(new_w, new_b, x, y, l2_lambda)
            if np.isfinite(new_loss) and new_loss <= loss + 1e-12:
                break
            lr /= 2.0
            if lr < 1e-15:
                raise TrainingDivergedError(
                    "loss is non-finite or non-decreasing at the smallest step size"
                )
        weights, biases = new_w, new_b
        loss, grad_w, grad_b = new_loss, new_gw, new_gb
        history.append(loss)
    return LogRegModel(weights, biases, l2_lambda, tuple(history))


def predict_proba_logreg(model: LogRegModel, features) -> np.ndarray:
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if x.shape[1] != model.n_features:
        raise DimensionMismatchError(
            f"input has {x.shape[1]} features, model expects {model.n_features}"
        )
    return _softmax(x @ model.weights.T + model.biases)


def predict_logreg(model: LogRegModel, features) -> np.ndarray:
    """Class labels: argmax of class probabilities (lowest index on ties)."""
    return np.argmax(predict_proba_logreg(model, features), axis=1)
