import numpy as np
import pytest

from eegemo import dataio


@pytest.fixture
def toy_csv(tmp_path):
    """3-row feature CSV with name-encoded labels."""
    path = tmp_path / "toy.csv"
    path.write_text(
        "f1,f2,label\n"
        "1.0,2.0,NEGATIVE\n"
        "3.0,4.0,Neutral\n"
        "5.0,6.0,positive\n"
    )
    return path


@pytest.fixture
def sine_recording():
    """Unit 10 Hz sine, 4 s at 150 Hz, one channel."""
    fs = 150.0
    t = np.arange(int(4 * fs)) / fs
    return dataio.EegRecording(("TP9",), np.sin(2 * np.pi * 10 * t)[None, :], fs)


def separated_dataset(separation, n_per_class=100, n_features=4, seed=7):
    return dataio.generate_synthetic(
        dataio.SyntheticSpec(
            n_per_class=n_per_class,
            n_features=n_features,
            class_separation=separation,
            seed=seed,
        )
    )
