import numpy as np
import pytest

from conftest import separated_dataset

from eegemo import dataio
from eegemo.errors import ArtifactSchemaError
from eegemo.models import (
    model_from_payload,
    model_payload,
    model_to_artifact,
    predict_logreg,
    predict_rf,
    predict_svm,
    train_logreg,
    train_rf,
    train_svm_ensemble,
)


@pytest.fixture(scope="module")
def trained():
    ds = separated_dataset(4.0, n_per_class=20, n_features=3, seed=17)
    return {
        "lr": (train_logreg(ds.features, ds.labels), predict_logreg),
        "svm": (train_svm_ensemble(ds.features, ds.labels), predict_svm),
        "rf": (train_rf(ds.features, ds.labels, n_trees=12, seed=3), predict_rf),
    }


@pytest.fixture(scope="module")
def probe():
    return np.random.default_rng(20).normal(0, 2, (60, 3))


@pytest.mark.parametrize("key", ["lr", "svm", "rf"])
def test_json_round_trip_bit_identical_predictions(trained, probe, key, tmp_path):
    model, predict = trained[key]
    path = tmp_path / f"{key}.json"
    dataio.write_artifact(model_to_artifact(model), path)
    kind, payload = dataio.read_artifact(path)
    assert kind == "model"
    restored = model_from_payload(payload)
    np.testing.assert_array_equal(predict(restored, probe), predict(model, probe))


def test_logreg_parameters_survive(trained):
    model, _ = trained["lr"]
    restored = model_from_payload(model_payload(model))
    np.testing.assert_array_equal(restored.weights, model.weights)
    np.testing.assert_array_equal(restored.biases, model.biases)
    assert restored.training_history == tuple(model.training_history)


def test_svm_decision_values_survive(trained, probe):
    model, _ = trained["svm"]
    restored = model_from_payload(model_payload(model))
    for a, b in zip(model.models, restored.models):
        np.testing.assert_array_equal(a.decision_function(probe), b.decision_function(probe))


def test_unknown_model_type_rejected():
    with pytest.raises(ArtifactSchemaError):
        model_from_payload({"model_type": "boosted_stumps"})
