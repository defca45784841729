"""JSON round-trip for trained models (schema-versioned artifact payloads).

A reloaded model reproduces bit-identical predictions: floats go through
repr-level round-trip serialization.
"""

from __future__ import annotations

import numpy as np

from ..errors import ArtifactSchemaError
from .forest import DecisionTree, RandomForestModel
from .logreg import LogRegModel
from .svm import SvmBinaryModel, SvmEnsemble


class _ModelArtifact:
    artifact_kind = "model"

    def __init__(self, payload: dict):
        self._payload = payload

    def payload_dict(self) -> dict:
        return self._payload


def model_to_artifact(model) -> _ModelArtifact:
    """Wrap a trained model so dataio.write_artifact can serialize it."""
    return _ModelArtifact(model_payload(model))


def model_payload(model) -> dict:
    if isinstance(model, LogRegModel):
        return {
            "model_type": "logreg",
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
            "l2_lambda": model.l2_lambda,
            "training_history": list(model.training_history),
        }
    if isinstance(model, SvmEnsemble):
        return {
            "model_type": "svm",
            "pairs": [list(p) for p in model.pairs],
            "binaries": [
                {
                    "support_vectors": b.support_vectors.tolist(),
                    "support_labels": b.support_labels.tolist(),
                    "alphas": b.alphas.tolist(),
                    "bias": b.bias,
                    "gamma": b.gamma,
                    "C": b.C,
                }
                for b in model.models
            ],
        }
    if isinstance(model, RandomForestModel):
        return {
            "model_type": "random_forest",
            "n_features": model.n_features,
            "seed": model.seed,
            "mtry": model.mtry,
            "min_leaf": model.min_leaf,
            "max_depth": model.max_depth,
            "bootstrap": model.bootstrap,
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "leaf_label": t.leaf_label.tolist(),
                }
                for t in model.trees
            ],
        }
    raise TypeError(f"cannot serialize model of type {type(model).__name__}")


def model_from_payload(payload: dict):
    kind = payload.get("model_type")
    if kind == "logreg":
        return LogRegModel(
            np.asarray(payload["weights"], dtype=np.float64),
            np.asarray(payload["biases"], dtype=np.float64),
            float(payload["l2_lambda"]),
            tuple(payload["training_history"]),
        )
    if kind == "svm":
        binaries = tuple(
            SvmBinaryModel(
                np.asarray(b["support_vectors"], dtype=np.float64),
                np.asarray(b["support_labels"], dtype=np.float64),
                np.asarray(b["alphas"], dtype=np.float64),
                float(b["bias"]),
                float(b["gamma"]),
                float(b["C"]),
            )
            for b in payload["binaries"]
        )
        return SvmEnsemble(binaries, tuple(tuple(p) for p in payload["pairs"]))
    if kind == "random_forest":
        trees = tuple(
            DecisionTree(
                np.asarray(t["feature"], dtype=np.int64),
                np.asarray(t["threshold"], dtype=np.float64),
                np.asarray(t["left"], dtype=np.int64),
                np.asarray(t["right"], dtype=np.int64),
                np.asarray(t["leaf_label"], dtype=np.int64),
            )
            for t in payload["trees"]
        )
        return RandomForestModel(
            trees,
            int(payload["n_features"]),
            int(payload["seed"]),
            int(payload["mtry"]),
            int(payload["min_leaf"]),
            payload["max_depth"],
            bool(payload["bootstrap"]),
        )
    raise ArtifactSchemaError(f"unknown model_type {kind!r}")
