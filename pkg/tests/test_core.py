import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commutesim.config import (
    ConfigError,
    ScenarioConfig,
    WeatherSpec,
    config_hash,
    default_config,
    dumps_config,
    load_config,
    loads_config,
    validate_config,
)
from commutesim.core import ACTIVE_MODES, MODES, CommuteCategory, ModeVector, TransportMode, Weather
from commutesim.rng import derive_rng_stream

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
vectors = st.builds(ModeVector, finite, finite, finite, finite)


class TestEnums:
    def test_four_modes_two_active(self):
        assert len(TransportMode) == 4
        assert [m for m in TransportMode if m.is_active] == [TransportMode.WALK, TransportMode.CYCLE]
        assert ACTIVE_MODES == (TransportMode.WALK, TransportMode.CYCLE)

    def test_weather_and_category_sizes(self):
        assert len(Weather) == 2
        assert len(CommuteCategory) == 3

    @pytest.mark.parametrize("text,mode", [("walk", TransportMode.WALK), ("PT", TransportMode.PUBLIC_TRANSPORT), (3, TransportMode.CAR)])
    def test_parse(self, text, mode):
        assert TransportMode.parse(text) is mode

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError):
            TransportMode.parse("hovercraft")


class TestModeVector:
    def test_total_function(self):
        v = ModeVector.from_mapping({"walk": 1, "cycle": 2, "public_transport": 3, "car": 4})
        assert [v[m] for m in MODES] == [1, 2, 3, 4]
        with pytest.raises(ValueError):
            ModeVector.from_mapping({"walk": 1, "cycle": 2, "car": 4})
        with pytest.raises(ValueError):
            ModeVector.from_iterable([1, 2, 3])

    @given(vectors, vectors)
    def test_sum_commutes_and_closes(self, a, b):
        s = a + b
        assert isinstance(s, ModeVector)
        assert s == b + a
        assert list(s.as_array()) == [x + y for x, y in zip(a.as_array(), b.as_array())]

    @given(vectors, finite)
    def test_scale_exact(self, a, k):
        assert (a * k).as_array().tolist() == [x * k for x in a.as_array()]
        assert k * a == a * k

    @given(vectors, vectors)
    def test_pointwise_multiply(self, a, b):
        assert (a * b).as_array().tolist() == [x * y for x, y in zip(a.as_array(), b.as_array())]

    def test_sum(self):
        assert ModeVector(1, 2, 3, 4).sum() == 10


class TestConfig:
    def test_default_is_valid(self):
        report = validate_config(default_config())
        assert report.is_valid, report.violations

    def test_subculture_orderings(self):
        a, b, c = (s.desirability for s in default_config().subcultures)
        assert a.cycle > a.car > a.walk > a.public_transport
        assert b.car > b.public_transport > b.walk > b.cycle
        assert c.walk == c.cycle > c.public_transport > c.car

    def test_intervention_default(self):
        iv = default_config().intervention
        assert (iv.banned_mode, iv.weekday, iv.start_day) == (TransportMode.CAR, 2, 365)

    def test_row_not_stochastic(self):
        cfg = default_config()
        bad = ScenarioConfig(weather=WeatherSpec(transition=((0.5, 0.6), (0.18, 0.82))))
        msgs = validate_config(bad).violations
        assert any("row not stochastic" in m for m in msgs)
        assert validate_config(cfg).is_valid

    def test_intervention_after_end(self):
        cfg = default_config().with_overrides(intervention_day=1825)
        assert any("intervention after end" in m for m in validate_config(cfg).violations)

    def test_validate_does_not_mutate(self):
        cfg = default_config().with_overrides(agent_count=0)
        before = dumps_config(cfg)
        validate_config(cfg)
        assert dumps_config(cfg) == before

    def test_out_of_range_values_reported(self):
        data = default_config().to_dict()
        data["neighbourhoods"][0]["supportiveness"]["walk"] = 1.5
        data["neighbourhoods"][1]["capacity"]["car"] = -1
        data["distance_cost"]["local"]["car"] = -0.1
        msgs = validate_config(ScenarioConfig.from_dict(data)).violations
        assert len(msgs) >= 3

    def test_round_trip_byte_identical(self, tmp_path):
        text = dumps_config(default_config())
        again = dumps_config(loads_config(text))
        assert again == text
        p = tmp_path / "c.json"
        p.write_text(text)
        assert dumps_config(load_config(p)) == text

    @given(
        st.integers(1, 10**6),
        st.integers(2, 5000),
        st.integers(0, 2**64 - 1),
        st.sampled_from(["interpolated", "literal"]),
    )
    @settings(max_examples=25, deadline=None)
    def test_round_trip_property(self, n, days, seed, cost_mode):
        cfg = default_config().with_overrides(
            agent_count=n, total_days=days, intervention_day=days // 2, master_seed=seed, cost_mode=cost_mode
        )
        text = dumps_config(cfg)
        assert dumps_config(loads_config(text)) == text
        assert config_hash(loads_config(text)) == config_hash(cfg)

    def test_unknown_key_is_error(self):
        with pytest.raises(ConfigError, match="unknown"):
            loads_config(json.dumps({"agents": 5}))
        with pytest.raises(ConfigError, match="unknown"):
            loads_config(json.dumps({"network": {"k": 4, "gamma": 1}}))

    def test_bad_json(self):
        with pytest.raises(ConfigError):
            loads_config("{not json")

    def test_partial_config_fills_defaults(self):
        cfg = loads_config(json.dumps({"agent_count": 1000, "intervention_day": 100, "neighbourhood_count": 5}))
        assert cfg.intervention.start_day == 100
        assert len(cfg.neighbourhoods) == 5
        assert validate_config(cfg).is_valid


class TestRng:
    def test_identical_streams(self):
        a = derive_rng_stream(42, "net", 0).random(1000)
        b = derive_rng_stream(42, "net", 0).random(1000)
        assert np.array_equal(a, b)

    def test_index_changes_stream(self):
        first = {derive_rng_stream(42, "net", i).integers(2**63) for i in range(10_000)}
        assert len(first) == 10_000

    def test_labels_independent(self):
        a = derive_rng_stream(42, "weather", 0).random(100_000)
        b = derive_rng_stream(42, "net", 0).random(100_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.01

    def test_seed_matters(self):
        assert derive_rng_stream(1, "x", 0).random() != derive_rng_stream(2, "x", 0).random()
