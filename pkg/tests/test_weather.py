import numpy as np
import pytest

from commutesim.core import Weather
from commutesim.weather import (
    MarkovWeather,
    estimate_transitions,
    generate_sequence,
    label_wet_days,
    read_rainfall,
    read_sequence,
    stationary_distribution,
    transition_counts,
    write_sequence,
)
from commutesim.rng import derive_rng_stream

from helpers import stationary_by_linear_solve

W, D = Weather.WET, Weather.DRY


def rng(i=0):
    return derive_rng_stream(5, "weather-test", i)


class TestEstimate:
    def test_hand_count(self):
        assert label_wet_days([5, 5, 5, 0, 0]).tolist() == [W, W, W, D, D]
        p = estimate_transitions([5, 5, 5, 0, 0])
        assert p[W, W] == pytest.approx(2 / 3)
        assert p[D].tolist() == [0.0, 1.0]

    def test_all_dry(self):
        p = estimate_transitions([0.0] * 30)
        assert p[D].tolist() == [0.0, 1.0]
        assert p[W].tolist() == [0.5, 0.5]

    def test_threshold_strict(self):
        assert label_wet_days([4.4, 4.41]).tolist() == [D, W]

    def test_empty_and_short(self):
        with pytest.raises(ValueError):
            estimate_transitions([])
        with pytest.raises(ValueError):
            estimate_transitions([3.0])

    def test_rows_stochastic(self):
        rain = rng().exponential(3.0, 400)
        p = estimate_transitions(rain)
        np.testing.assert_allclose(p.sum(axis=1), 1.0)


class TestGenerate:
    def test_absorbing_wet(self):
        seq = generate_sequence([[1.0, 0.0], [0.3, 0.7]], W, 500, rng())
        assert np.all(seq == W)

    def test_identity_dry(self):
        assert np.all(generate_sequence(np.eye(2), D, 500, rng()) == D)

    def test_initial_and_length(self):
        seq = generate_sequence([[0.5, 0.5], [0.5, 0.5]], "wet", 37, rng())
        assert seq.size == 37 and seq[0] == W

    def test_stationary_frequency(self):
        p = np.array([[0.6, 0.4], [0.2, 0.8]])
        seq = generate_sequence(p, D, 100_000, rng(1))
        pi = stationary_by_linear_solve(p)
        assert pi[W] == pytest.approx(1 / 3)
        assert abs((seq == W).mean() - pi[W]) < 0.01
        np.testing.assert_allclose(stationary_distribution(p), pi, atol=1e-12)

    def test_empirical_transitions(self):
        p = np.array([[0.5, 0.5], [0.18, 0.82]])
        seq = generate_sequence(p, D, 100_000, rng(2))
        c = transition_counts(seq)
        emp = c / c.sum(axis=1, keepdims=True)
        assert np.all(np.abs(emp - p) < 0.02)

    def test_same_seed_same_sequence(self):
        p = [[0.5, 0.5], [0.18, 0.82]]
        assert np.array_equal(generate_sequence(p, D, 1000, rng(3)), generate_sequence(p, D, 1000, rng(3)))

    def test_rejects_non_stochastic(self):
        with pytest.raises(ValueError):
            generate_sequence([[0.5, 0.6], [0.2, 0.8]], D, 10, rng())


class TestEstimator:
    def test_fit_then_sample(self):
        truth = np.array([[0.5, 0.5], [0.18, 0.82]])
        seq = generate_sequence(truth, D, 50_000, rng(4))
        rain = np.where(seq == W, 9.0, 0.5)
        model = MarkovWeather().fit(rain)
        assert np.all(np.abs(model.transition_matrix_ - truth) < 0.02)
        out = model.sample(100, rng=rng(5))
        assert out.size == 100 and out[0] == D


def test_rainfall_and_sequence_files(tmp_path):
    p = tmp_path / "rain.csv"
    p.write_text("date,mm\n2017-01-01,5.0\n2017-01-02,0.0\n2017-01-03,4.4\n")
    assert read_rainfall(p).tolist() == [5.0, 0.0, 4.4]
    seq = label_wet_days(read_rainfall(p))
    q = tmp_path / "seq.csv"
    write_sequence(seq, q)
    assert np.array_equal(read_sequence(q), seq)
