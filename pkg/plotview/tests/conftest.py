import json

import pytest


def artifact(kind, payload, version=1):
    return {"schema_version": version, "kind": kind, "payload": payload}


def write(path, document):
    path.write_text(json.dumps(document, indent=2))
    return path


@pytest.fixture
def sample_payloads():
    """Minimal valid payloads, one per figure kind."""
    return {
        "timeseries": {
            "channel_names": ["TP9", "AF7"],
            "sampling_rate_hz": 150.0,
            "samples": [[0.0, 1.0, 0.5, -0.5] * 30, [1.0, 0.0, -1.0, 0.0] * 30],
        },
        "psd": {
            "channel_names": ["TP9"],
            "frequencies_hz": [0.0, 1.0, 2.0, 3.0, 4.0],
            "power": [[0.0, 0.5, 2.0, 0.5, 0.1]],
            "segment_length": 8,
            "overlap_fraction": 0.5,
        },
        "correlation": {
            "feature_names": ["a", "b", "c"],
            "values": [[1.0, 0.5, -0.2], [0.5, 1.0, 0.1], [-0.2, 0.1, 1.0]],
            "constant_features": [],
        },
        "embedding": {
            "coordinates": [[0.0, 0.0], [1.0, 1.0], [5.0, 5.0], [6.0, 5.0], [-3.0, 2.0], [-3.5, 2.5]],
            "labels": [0, 0, 1, 1, 2, 2],
            "label_names": {"0": "NEGATIVE", "1": "NEUTRAL", "2": "POSITIVE"},
            "final_kl": 0.12,
            "perplexity": 2.0,
        },
        "significance": {
            "alpha": 0.05,
            "label_names": {"0": "NEGATIVE", "1": "NEUTRAL", "2": "POSITIVE"},
            "classes": [
                {"label": 0, "name": "NEGATIVE", "significant": 5, "non_significant": 3},
                {"label": 1, "name": "NEUTRAL", "significant": 2, "non_significant": 6},
                {"label": 2, "name": "POSITIVE", "significant": 4, "non_significant": 4},
            ],
            "tests": [],
        },
        "confusion": {
            "counts": [[10, 1, 0], [2, 9, 1], [0, 0, 12]],
            "label_names": {"0": "NEGATIVE", "1": "NEUTRAL", "2": "POSITIVE"},
            "model": "Logistic regression",
        },
        "comparison": {
            "rows": [
                {"model": "Logistic regression", "key": "lr", "accuracy": 0.956, "f1_weighted": 0.956, "f1_macro": 0.956},
                {"model": "SVM", "key": "svm", "accuracy": 0.939, "f1_weighted": 0.938, "f1_macro": 0.938},
                {"model": "Random Forest", "key": "rf", "accuracy": 0.975, "f1_weighted": 0.975, "f1_macro": 0.975},
            ],
            "best_model": "Random Forest",
            "ranking": ["Random Forest", "Logistic regression", "SVM"],
            "provenance": {"seed": 42},
        },
    }
