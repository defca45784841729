import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from conftest import separated_dataset

from eegemo import analysis, dataio
from eegemo.errors import DegenerateVarianceError


def t_density(x, df):
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


class TestCorrelation:
    def test_self_correlation(self):
        rng = np.random.default_rng(0)
        x = rng.normal(0, 1, 50)
        cm = analysis.correlation_matrix(np.column_stack([x, x]))
        assert cm.values[0, 1] == pytest.approx(1.0)

    def test_sign_flip(self):
        rng = np.random.default_rng(1)
        x = rng.normal(0, 1, 50)
        cm = analysis.correlation_matrix(np.column_stack([x, -x]))
        assert cm.values[0, 1] == pytest.approx(-1.0)

    def test_hand_computed_three_points(self):
        # Pearson by hand: r = 3 / sqrt(2 * 14/3) = sqrt(27/28)
        cm = analysis.correlation_matrix(np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 4.0]]))
        assert cm.values[0, 1] == pytest.approx(math.sqrt(27.0 / 28.0), abs=5e-5)
        assert cm.values[0, 1] == pytest.approx(0.9820, abs=5e-5)

    def test_constant_column_sentinel(self):
        cm = analysis.correlation_matrix(
            np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]]), ("x", "const")
        )
        assert cm.constant_features == ("const",)
        assert cm.values[0, 1] == 0.0
        assert cm.values[1, 1] == 0.0
        assert cm.values[0, 0] == 1.0

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(2)
        cm = analysis.correlation_matrix(rng.normal(0, 1, (30, 8)))
        assert np.abs(cm.values - cm.values.T).max() < 1e-12
        assert cm.values.min() >= -1.0 and cm.values.max() <= 1.0

    def test_requires_two_rows(self):
        with pytest.raises(ValueError):
            analysis.correlation_matrix(np.ones((1, 3)))

    @settings(max_examples=20, deadline=None)
    @given(
        scale=st.floats(min_value=0.01, max_value=100.0),
        shift=st.floats(min_value=-100.0, max_value=100.0),
    )
    def test_affine_invariance(self, scale, shift):
        rng = np.random.default_rng(7)
        x = rng.normal(0, 1, (40, 3))
        base = analysis.correlation_matrix(x).values
        mapped = x.copy()
        mapped[:, 1] = scale * mapped[:, 1] + shift
        moved = analysis.correlation_matrix(mapped).values
        np.testing.assert_allclose(moved, base, atol=1e-9)


class TestWelchTTest:
    def test_identical_samples(self):
        r = analysis.welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert r.t_statistic == 0.0
        assert r.p_value == pytest.approx(1.0)

    def test_hand_computed_example(self):
        # means 3 and 4, each sample variance 2.5 -> t = -1, df = 8 exactly
        r = analysis.welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert r.t_statistic == pytest.approx(-1.0, abs=1e-12)
        assert r.degrees_of_freedom == pytest.approx(8.0, abs=1e-12)

    def test_degenerate_variance(self):
        with pytest.raises(DegenerateVarianceError):
            analysis.welch_t_test([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])

    def test_antisymmetry(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(0, 1, 12), rng.normal(0.5, 2, 9)
        r1 = analysis.welch_t_test(a, b)
        r2 = analysis.welch_t_test(b, a)
        assert r1.t_statistic == pytest.approx(-r2.t_statistic)
        assert r1.p_value == pytest.approx(r2.p_value)

    def test_p_value_engine_against_quadrature(self):
        # oracle: numerically integrate the t density over the two tails
        rng = np.random.default_rng(11)
        for _ in range(50):
            t = float(rng.uniform(-8.0, 8.0))
            df = float(rng.uniform(1.0, 200.0))
            tail, _ = integrate.quad(t_density, abs(t), np.inf, args=(df,), epsabs=1e-14)
            assert analysis.student_t_two_sided_p(t, df) == pytest.approx(
                2 * tail, abs=1e-10
            )


class TestSignificanceSummary:
    def test_partition_property(self):
        ds = separated_dataset(1.0, n_per_class=20, n_features=10)
        summary = analysis.significance_summary(ds, alpha=0.05)
        for label, (s, ns) in summary.counts.items():
            assert s + ns == ds.n_features

    def test_null_rate_matches_alpha(self):
        # simulation oracle: with no separation the one-vs-rest tests are null,
        # so S ~ Binomial(n_features, alpha); check the 99% interval
        ds = separated_dataset(0.0, n_per_class=40, n_features=200, seed=21)
        summary = analysis.significance_summary(ds, alpha=0.05)
        expected = 200 * 0.05
        half_width = 2.576 * math.sqrt(200 * 0.05 * 0.95)
        for label, (s, _) in summary.counts.items():
            assert expected - half_width <= s <= expected + half_width

    def test_all_features_informative(self):
        # construction: unequally spaced class means (0, 10, 30) on every
        # feature, so each class mean differs from its complement's mean
        rng = np.random.default_rng(5)
        n_per, n_features = 30, 6
        shifts = np.array([0.0, 10.0, 30.0])
        labels = np.repeat([0, 1, 2], n_per)
        features = rng.normal(0, 1, (3 * n_per, n_features)) + shifts[labels][:, None]
        ds = dataio.LabeledDataset(
            features, tuple(f"f{i}" for i in range(n_features)), labels
        )
        summary = analysis.significance_summary(ds, alpha=0.05)
        for label, (s, ns) in summary.counts.items():
            assert s == ds.n_features
            assert ns == 0

    def test_shuffled_labels_null_rate(self):
        ds = separated_dataset(8.0, n_per_class=40, n_features=200, seed=13)
        rng = np.random.default_rng(99)
        shuffled = dataio.LabeledDataset(
            ds.features, ds.feature_names, rng.permutation(ds.labels)
        )
        summary = analysis.significance_summary(shuffled, alpha=0.05)
        expected = 200 * 0.05
        half_width = 2.576 * math.sqrt(200 * 0.05 * 0.95)
        for label, (s, _) in summary.counts.items():
            assert expected - half_width <= s <= expected + half_width

    def test_degenerate_feature_counts_as_non_significant(self):
        features = np.column_stack([np.repeat([0.0, 1.0, 2.0], 10), np.full(30, 4.0)])
        ds = dataio.LabeledDataset(features, ("good", "flat"), np.repeat([0, 1, 2], 10))
        summary = analysis.significance_summary(ds, alpha=0.05)
        for label, (s, ns) in summary.counts.items():
            assert s + ns == 2
        flat_rows = [r for label, r in summary.tests if r.feature_name == "flat"]
        assert all(not r.significant for r in flat_rows)

    def test_small_class_rejected(self):
        features = np.random.default_rng(0).normal(0, 1, (5, 3))
        ds = dataio.LabeledDataset(features, ("a", "b", "c"), [0, 0, 1, 1, 2])
        with pytest.raises(ValueError):
            analysis.significance_summary(ds)
