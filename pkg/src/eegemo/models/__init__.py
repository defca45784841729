"""The three classifiers, each trained from first principles.

All predictors share one contract: ``predict_*(model, features)`` maps a
(n_samples, n_features) matrix to integer labels in {0, 1, 2}.
"""

from .forest import RandomForestModel, predict_rf, predict_tree, train_rf
from .logreg import (
    LogRegModel,
    loss_and_gradient,
    predict_logreg,
    predict_proba_logreg,
    sigmoid,
    train_logreg,
)
from .serialize import model_from_payload, model_payload, model_to_artifact
from .svm import (
    SvmBinaryModel,
    SvmEnsemble,
    predict_svm,
    rbf_kernel,
    scale_gamma,
    train_svm_binary,
    train_svm_ensemble,
)

__all__ = [
    "LogRegModel",
    "RandomForestModel",
    "SvmBinaryModel",
    "SvmEnsemble",
    "loss_and_gradient",
    "model_from_payload",
    "model_payload",
    "model_to_artifact",
    "predict_logreg",
    "predict_proba_logreg",
    "predict_rf",
    "predict_svm",
    "predict_tree",
    "rbf_kernel",
    "scale_gamma",
    "sigmoid",
    "train_logreg",
    "train_rf",
    "train_svm_binary",
    "train_svm_ensemble",
]
