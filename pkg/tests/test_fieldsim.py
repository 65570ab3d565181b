"""Field simulation: weather envelope, soil bucket, sensor calibration."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agrisim.errors import ConfigurationError, InputError
from agrisim.fieldsim import (
    FieldState,
    NoiseStream,
    SeasonConfig,
    SensorSpec,
    SoilProfile,
    WeatherDay,
    depletion_to_moisture_pct,
    generate_weather,
    ks_stress,
    moisture_pct_to_depletion,
    sample_air_sensor,
    sample_soil_sensor,
    step_soil_water,
)

PROFILE = SoilProfile()
AIR_SPEC = SensorSpec(kind="air_temp_humidity", noise_sigma=0.0)


def _day(rain=0.0, t_min=18.0, t_max=28.0, rh=45.0, idx=0):
    return WeatherDay(day_index=idx, day_of_year=200, t_min_c=t_min,
                      t_max_c=t_max, t_mean_c=(t_min + t_max) / 2,
                      rh_mean_pct=rh, rain_mm=rain)


class TestWeather:
    def test_deterministic_per_seed(self):
        cfg = SeasonConfig(days=60)
        assert generate_weather(cfg, 42) == generate_weather(cfg, 42)

    def test_different_seeds_differ(self):
        cfg = SeasonConfig(days=60)
        assert generate_weather(cfg, 1) != generate_weather(cfg, 2)

    def test_dry_season_has_no_rain(self):
        for w in generate_weather(SeasonConfig(days=60), 7):
            assert w.rain_mm == 0.0

    def test_envelope_respected(self):
        # default envelope: 15-30 C mean temperature, 30-60% humidity
        for w in generate_weather(SeasonConfig(days=60), 42):
            assert 15.0 <= w.t_mean_c <= 30.0
            assert 15.0 <= w.t_min_c <= w.t_max_c <= 30.0
            assert 30.0 <= w.rh_mean_pct <= 60.0

    def test_reversed_envelope_rejected(self):
        with pytest.raises(ConfigurationError):
            SeasonConfig(days=10, temp_envelope_c=(30.0, 15.0))
        with pytest.raises(ConfigurationError):
            SeasonConfig(days=10, rh_envelope_pct=(60.0, 30.0))

    def test_zero_length_season_rejected(self):
        with pytest.raises(ConfigurationError):
            SeasonConfig(days=0)


class TestSoilStep:
    def test_zero_forcing_only_advances_day(self):
        state = FieldState(depletion_mm=20.0)
        new = step_soil_water(state, _day(), 0.0, 0.0, PROFILE)
        assert new.depletion_mm == state.depletion_mm
        assert new.cumulative_eta_mm == 0.0
        assert new.cumulative_drainage_mm == 0.0
        assert new.day_index == 1

    def test_surplus_irrigation_drains(self):
        taw = PROFILE.taw_mm
        state = FieldState(depletion_mm=taw / 2)
        irrigation = taw  # more than the deficit
        new = step_soil_water(state, _day(), irrigation, 0.0, PROFILE)
        assert new.depletion_mm == 0.0
        assert new.cumulative_drainage_mm == pytest.approx(irrigation - taw / 2)

    def test_negative_input_rejected(self):
        with pytest.raises(InputError):
            step_soil_water(FieldState(), _day(), -1.0, 0.0, PROFILE)
        with pytest.raises(InputError):
            step_soil_water(FieldState(), _day(), 0.0, float("nan"), PROFILE)

    def test_trajectory_matches_fine_step_oracle(self):
        # independent hourly integration of the same bucket balance
        rng = np.random.default_rng(3)
        etc_series = rng.uniform(1.0, 4.5, size=60)
        irrigation = [8.0 if d % 3 == 0 else 0.0 for d in range(60)]

        state = FieldState(depletion_mm=30.0)
        for d in range(60):
            state = step_soil_water(state, _day(idx=d), irrigation[d],
                                    float(etc_series[d]), PROFILE)

        dep = 30.0
        taw = PROFILE.taw_mm
        for d in range(60):
            for _ in range(24):
                water_in = irrigation[d] / 24.0
                drain = max(0.0, water_in - dep)
                dep = max(0.0, dep - water_in)
                ks = ks_stress(dep, PROFILE)
                eta = min(etc_series[d] / 24.0 * ks, taw - dep)
                dep += eta
        assert abs(state.depletion_mm - dep) < 0.5

    @given(st.lists(st.tuples(st.floats(0, 30), st.floats(0, 30),
                              st.floats(0, 10)), min_size=1, max_size=80))
    @settings(max_examples=1000, deadline=None)
    def test_conservation_and_bounds(self, forcing):
        state = FieldState()
        for i, (rain, irr, etc) in enumerate(forcing):
            day = _day(rain=rain, idx=i)
            new = step_soil_water(state, day, irr, etc, PROFILE)
            eta = new.cumulative_eta_mm - state.cumulative_eta_mm
            drain = new.cumulative_drainage_mm - state.cumulative_drainage_mm
            delta = new.depletion_mm - state.depletion_mm
            # exact water conservation per step
            assert abs((rain + irr) - (eta + drain) + delta) < 1e-9
            assert 0.0 <= new.depletion_mm <= PROFILE.taw_mm
            state = new

    @given(st.floats(0.0, 1.0))
    def test_ks_in_unit_interval_and_one_below_raw(self, frac):
        dep = frac * PROFILE.taw_mm
        ks = ks_stress(dep, PROFILE)
        assert 0.0 <= ks <= 1.0
        if dep <= PROFILE.raw_mm:
            assert ks == 1.0


class TestDisplayScale:
    def test_zero_depletion_is_field_capacity_point(self):
        expected = 100.0 * (PROFILE.theta_fc - PROFILE.theta_ad) / (
            PROFILE.theta_sat - PROFILE.theta_ad)
        assert depletion_to_moisture_pct(0.0, PROFILE) == pytest.approx(expected)

    def test_scale_anchors(self):
        # theta at air-dry -> 0%, theta at saturation -> 100%
        dep_at_ad = (PROFILE.theta_fc - PROFILE.theta_ad) * 1000 * PROFILE.root_depth_m
        # air-dry lies beyond TAW, so check through the inverse map instead
        assert moisture_pct_to_depletion(0.0, PROFILE) == pytest.approx(dep_at_ad)
        assert moisture_pct_to_depletion(100.0, PROFILE) == pytest.approx(
            (PROFILE.theta_fc - PROFILE.theta_sat) * 1000 * PROFILE.root_depth_m)

    def test_out_of_range_depletion_rejected(self):
        with pytest.raises(InputError):
            depletion_to_moisture_pct(-1.0, PROFILE)
        with pytest.raises(InputError):
            depletion_to_moisture_pct(PROFILE.taw_mm + 1.0, PROFILE)

    @given(st.floats(0.0, 1.0))
    def test_round_trip_within_taw(self, frac):
        dep = frac * PROFILE.taw_mm
        pct = depletion_to_moisture_pct(dep, PROFILE)
        assert moisture_pct_to_depletion(pct, PROFILE) == pytest.approx(
            dep, abs=1e-9)


class TestSoilSensor:
    def test_noiseless_round_trip(self):
        spec = SensorSpec(noise_sigma=0.0)
        reading = sample_soil_sensor(50.0, spec, NoiseStream(0))
        assert reading.value == pytest.approx(50.0)

    @given(st.floats(0.0, 100.0))
    def test_noiseless_round_trip_any_moisture(self, true_pct):
        spec = SensorSpec(noise_sigma=0.0)
        reading = sample_soil_sensor(true_pct, spec, NoiseStream(0))
        assert reading.value == pytest.approx(true_pct, abs=1e-9)

    def test_air_counts_anchor(self):
        spec = SensorSpec(noise_sigma=0.0)
        reading = sample_soil_sensor(0.0, spec, NoiseStream(0))
        assert reading.value == 0.0

    def test_degenerate_calibration_rejected(self):
        with pytest.raises(ConfigurationError):
            SensorSpec(air_counts=1200, water_counts=1200)

    def test_noise_is_unbiased(self):
        # Monte-Carlo: symmetric noise without clamping keeps the mean
        spec = SensorSpec(noise_sigma=40.0)
        noise = NoiseStream(11)
        values = [sample_soil_sensor(40.0, spec, noise).value
                  for _ in range(10_000)]
        assert abs(np.mean(values) - 40.0) < 0.5

    def test_identical_seed_identical_stream(self):
        spec = SensorSpec(noise_sigma=25.0)
        a = [sample_soil_sensor(40.0, spec, NoiseStream(5)).value]
        b = [sample_soil_sensor(40.0, spec, NoiseStream(5)).value]
        assert a == b


class TestAirSensor:
    def test_values_pass_through_noiselessly(self):
        t, rh = sample_air_sensor(32.6, 38.0, AIR_SPEC, NoiseStream(0))
        assert (t.value, rh.value) == (32.6, 38.0)

    def test_humidity_clamped_at_100(self):
        spec = SensorSpec(kind="air_temp_humidity", noise_sigma=5.0)
        noise = NoiseStream(1)
        for _ in range(200):
            _, rh = sample_air_sensor(25.0, 100.0, spec, noise)
            assert rh.value <= 100.0

    def test_quantization_to_tenths(self):
        t, _ = sample_air_sensor(20.24, 50.0, AIR_SPEC, NoiseStream(0))
        assert t.value == 20.2

    def test_wrong_kind_rejected(self):
        with pytest.raises(InputError):
            sample_air_sensor(20.0, 50.0, SensorSpec(), NoiseStream(0))


class TestNoiseStream:
    def test_digest_tracks_consumption(self):
        a, b = NoiseStream(9), NoiseStream(9)
        for _ in range(50):
            a.draw()
            b.draw()
        assert a.digest() == b.digest()
        a.draw()
        assert a.digest() != b.digest()
