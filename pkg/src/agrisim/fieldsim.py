"""Synthetic field model: seeded weather, a daily root-zone water bucket, and
noisy calibrated sensors.

The field is a single representative point. Weather is drawn inside a
configured envelope (deterministic per seed), the soil evolves as a
single-bucket depletion balance with a linear stress coefficient, and sensors
report the bucket state on a fixed sub-daily schedule with Gaussian noise and
two-point calibration.

Soil moisture is reported on a normalized display scale: 0% at air-dry,
100% at saturation. Thresholds like "irrigate below 25%" refer to this scale.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from agrisim.errors import ConfigurationError, InputError

SOIL_MOISTURE = "soil_moisture"
AIR_TEMP_HUMIDITY = "air_temp_humidity"

UNIT_PCT_MOISTURE = "pct_moisture"
UNIT_DEG_C = "deg_c"
UNIT_PCT_RH = "pct_rh"

SENSOR_TEMP_MIN_C = -40.0
SENSOR_TEMP_MAX_C = 80.0


@dataclass(frozen=True)
class WeatherDay:
    """One day of synthetic weather."""

    day_index: int
    day_of_year: int
    t_min_c: float
    t_max_c: float
    t_mean_c: float
    rh_mean_pct: float
    rain_mm: float

    def __post_init__(self):
        if not (self.t_min_c <= self.t_mean_c <= self.t_max_c):
            raise ConfigurationError(
                f"temperature ordering violated: {self.t_min_c}, "
                f"{self.t_mean_c}, {self.t_max_c}"
            )
        if not 0.0 <= self.rh_mean_pct <= 100.0:
            raise ConfigurationError(f"humidity out of range: {self.rh_mean_pct}")
        if self.rain_mm < 0.0:
            raise ConfigurationError(f"negative rain: {self.rain_mm}")


@dataclass(frozen=True)
class SeasonConfig:
    """Season length, location, and the weather envelope."""

    days: int
    start_day_of_year: int = 182
    latitude_deg: float = 0.4
    temp_envelope_c: tuple[float, float] = (15.0, 30.0)
    rh_envelope_pct: tuple[float, float] = (30.0, 60.0)
    dry_season: bool = True
    rain_probability: float = 0.0
    rain_mean_mm: float = 0.0

    def __post_init__(self):
        if self.days < 1:
            raise ConfigurationError("season must be at least 1 day")
        if self.temp_envelope_c[0] > self.temp_envelope_c[1]:
            raise ConfigurationError(
                f"temperature envelope reversed: {self.temp_envelope_c}"
            )
        if self.rh_envelope_pct[0] > self.rh_envelope_pct[1]:
            raise ConfigurationError(
                f"humidity envelope reversed: {self.rh_envelope_pct}"
            )
        if not (0.0 <= self.rh_envelope_pct[0] and self.rh_envelope_pct[1] <= 100.0):
            raise ConfigurationError("humidity envelope outside [0, 100]")
        if not 1 <= self.start_day_of_year <= 365:
            raise ConfigurationError("start_day_of_year must be in [1, 365]")


@dataclass(frozen=True)
class SoilProfile:
    """Bucket-model soil parameters for the root zone.

    theta_ad is the air-dry water content anchoring 0% on the display scale;
    theta_sat anchors 100%. Artifact defaults approximate a loam under maize
    and are meant to be overridden per scenario.
    """

    theta_sat: float = 0.45
    theta_fc: float = 0.32
    theta_wp: float = 0.15
    theta_ad: float = 0.05
    root_depth_m: float = 0.6
    depletion_fraction_p: float = 0.55

    def __post_init__(self):
        if not (0.0 < self.theta_ad < self.theta_wp < self.theta_fc
                < self.theta_sat < 1.0):
            raise ConfigurationError(
                "soil water contents must satisfy "
                "0 < theta_ad < theta_wp < theta_fc < theta_sat < 1"
            )
        if not 0.0 < self.depletion_fraction_p < 1.0:
            raise ConfigurationError("depletion_fraction_p must be in (0, 1)")
        if self.root_depth_m <= 0.0:
            raise ConfigurationError("root_depth_m must be positive")

    @property
    def taw_mm(self) -> float:
        """Total available water in the root zone (mm)."""
        return 1000.0 * (self.theta_fc - self.theta_wp) * self.root_depth_m

    @property
    def raw_mm(self) -> float:
        """Readily available water (mm); depletion beyond this causes stress."""
        return self.depletion_fraction_p * self.taw_mm


@dataclass(frozen=True)
class FieldState:
    """Ground-truth water state of the simulated field."""

    depletion_mm: float = 0.0
    cumulative_drainage_mm: float = 0.0
    cumulative_irrigation_mm: float = 0.0
    cumulative_eta_mm: float = 0.0
    day_index: int = 0


@dataclass(frozen=True)
class SensorSpec:
    """A buried soil probe or an air temperature/humidity sensor."""

    kind: str = SOIL_MOISTURE
    adc_bits: int = 12
    air_counts: float = 3500.0
    water_counts: float = 1200.0
    noise_sigma: float = 0.0
    sample_interval_s: int = 300
    depth_cm: float = 15.0

    def __post_init__(self):
        if self.kind not in (SOIL_MOISTURE, AIR_TEMP_HUMIDITY):
            raise ConfigurationError(f"unknown sensor kind: {self.kind}")
        if self.water_counts >= self.air_counts:
            raise ConfigurationError(
                "water_counts must be below air_counts (wetter soil reads lower)"
            )
        if self.sample_interval_s <= 0:
            raise ConfigurationError("sample_interval_s must be positive")
        if self.noise_sigma < 0:
            raise ConfigurationError("noise_sigma must be non-negative")


@dataclass(frozen=True)
class SensorReading:
    timestamp_s: float
    sensor_id: str
    kind: str
    value: float
    unit: str


class NoiseStream:
    """Seeded standard-normal stream that hashes every draw it hands out.

    The hash lets an output manifest prove that two simulation arms consumed
    identical noise.
    """

    def __init__(self, seed: int):
        self._rng = np.random.default_rng(seed)
        self._hasher = hashlib.sha256()
        self.draw_count = 0

    def draw(self) -> float:
        z = float(self._rng.standard_normal())
        self._hasher.update(np.float64(z).tobytes())
        self.draw_count += 1
        return z

    def digest(self) -> str:
        return self._hasher.hexdigest()


def generate_weather(season: SeasonConfig, seed: int) -> list[WeatherDay]:
    """Draw one WeatherDay per season day, deterministically for a seed.

    Daily means follow a slow sinusoid across the season plus seeded noise,
    clipped strictly inside the envelope so the diurnal spread always fits.
    Dry-season scenarios force rain to zero.
    """
    rng = np.random.default_rng(seed)
    t_lo, t_hi = season.temp_envelope_c
    rh_lo, rh_hi = season.rh_envelope_pct
    t_mid, t_half = (t_lo + t_hi) / 2.0, (t_hi - t_lo) / 2.0
    rh_mid, rh_half = (rh_lo + rh_hi) / 2.0, (rh_hi - rh_lo) / 2.0

    days = []
    for i in range(season.days):
        phase = 2.0 * math.pi * i / max(season.days, 2)
        c = t_mid + 0.35 * t_half * math.sin(phase + 0.7)
        c += rng.normal(0.0, 0.15 * t_half)
        # keep the center strictly inside so the diurnal spread is positive
        margin = 0.08 * t_half
        c = float(np.clip(c, t_lo + margin, t_hi - margin))
        spread = rng.uniform(0.55, 0.95) * min(c - t_lo, t_hi - c)
        t_min, t_max = c - spread, c + spread

        rh = rh_mid + 0.4 * rh_half * math.sin(phase + 2.1)
        rh += rng.normal(0.0, 0.2 * rh_half)
        rh = float(np.clip(rh, rh_lo, rh_hi))

        if season.dry_season:
            rain = 0.0
        else:
            wet = rng.random() < season.rain_probability
            rain = float(rng.exponential(season.rain_mean_mm)) if wet else 0.0

        doy = (season.start_day_of_year - 1 + i) % 365 + 1
        days.append(WeatherDay(
            day_index=i, day_of_year=doy,
            t_min_c=t_min, t_max_c=t_max, t_mean_c=(t_min + t_max) / 2.0,
            rh_mean_pct=rh, rain_mm=rain,
        ))
    return days


def step_soil_water(state: FieldState, weather: WeatherDay,
                    irrigation_mm: float, etc_mm: float,
                    profile: SoilProfile) -> FieldState:
    """Advance the bucket one day.

    Water in (rain + irrigation) first reduces depletion, with any surplus
    past field capacity leaving as drainage; crop water uptake then increases
    depletion, scaled by the stress coefficient Ks and capped so depletion
    never exceeds total available water. The step conserves water exactly:
    (rain + irrigation) - (ETa + drainage) == -delta(depletion).
    """
    for name, v in (("rain", weather.rain_mm), ("irrigation", irrigation_mm),
                    ("etc", etc_mm)):
        if not math.isfinite(v) or v < 0.0:
            raise InputError(f"{name} must be finite and non-negative, got {v}")

    taw = profile.taw_mm
    dep = state.depletion_mm
    water_in = weather.rain_mm + irrigation_mm

    drainage = max(0.0, water_in - dep)
    dep_wet = max(0.0, dep - water_in)

    ks = ks_stress(dep, profile)
    eta = etc_mm * ks
    # cap uptake so depletion cannot overshoot TAW
    eta = min(eta, taw - dep_wet)
    dep_new = dep_wet + eta

    return FieldState(
        depletion_mm=dep_new,
        cumulative_drainage_mm=state.cumulative_drainage_mm + drainage,
        cumulative_irrigation_mm=state.cumulative_irrigation_mm + irrigation_mm,
        cumulative_eta_mm=state.cumulative_eta_mm + eta,
        day_index=state.day_index + 1,
    )


def ks_stress(depletion_mm: float, profile: SoilProfile) -> float:
    """Linear water-stress coefficient: 1 while depletion <= RAW, falling to
    0 at TAW."""
    taw = profile.taw_mm
    p = profile.depletion_fraction_p
    ks = (taw - depletion_mm) / (taw * (1.0 - p))
    return float(np.clip(ks, 0.0, 1.0))


def depletion_to_moisture_pct(depletion_mm: float, profile: SoilProfile) -> float:
    """Map bucket depletion onto the 0-100% air-dry..saturation display scale."""
    taw = profile.taw_mm
    if not 0.0 <= depletion_mm <= taw + 1e-9:
        raise InputError(f"depletion {depletion_mm} outside [0, TAW={taw}]")
    theta = profile.theta_fc - depletion_mm / (1000.0 * profile.root_depth_m)
    pct = 100.0 * (theta - profile.theta_ad) / (profile.theta_sat - profile.theta_ad)
    return float(np.clip(pct, 0.0, 100.0))


def moisture_pct_to_depletion(moisture_pct: float, profile: SoilProfile) -> float:
    """Inverse of the display mapping (unclamped in depletion; may exceed TAW
    when the percentage lies below the wilting point)."""
    theta = (profile.theta_ad
             + moisture_pct / 100.0 * (profile.theta_sat - profile.theta_ad))
    return (profile.theta_fc - theta) * 1000.0 * profile.root_depth_m


def soil_raw_counts(true_moisture_pct: float, spec: SensorSpec) -> float:
    """Noiseless ADC counts for a moisture level (linear two-point model)."""
    frac = true_moisture_pct / 100.0
    return spec.air_counts + frac * (spec.water_counts - spec.air_counts)


def sample_soil_sensor(true_moisture_pct: float, spec: SensorSpec,
                       noise: NoiseStream, timestamp_s: float = 0.0,
                       sensor_id: str = "soil-1") -> SensorReading:
    """Simulate one soil-probe reading: raw counts plus Gaussian noise,
    clamped to the ADC range, then two-point calibrated back to percent."""
    if spec.kind != SOIL_MOISTURE:
        raise InputError(f"not a soil sensor: {spec.kind}")
    if spec.air_counts == spec.water_counts:
        raise ConfigurationError("degenerate calibration: air_counts == water_counts")
    raw = soil_raw_counts(true_moisture_pct, spec)
    raw += spec.noise_sigma * noise.draw()
    raw = float(np.clip(raw, 0.0, 2 ** spec.adc_bits - 1))
    value = 100.0 * (spec.air_counts - raw) / (spec.air_counts - spec.water_counts)
    value = float(np.clip(value, 0.0, 100.0))
    return SensorReading(timestamp_s, sensor_id, SOIL_MOISTURE, value,
                         UNIT_PCT_MOISTURE)


def sample_air_sensor(t_true_c: float, rh_true_pct: float, spec: SensorSpec,
                      noise: NoiseStream, timestamp_s: float = 0.0,
                      sensor_id: str = "air-1"
                      ) -> tuple[SensorReading, SensorReading]:
    """Simulate a paired temperature/humidity reading quantized to 0.1."""
    if spec.kind != AIR_TEMP_HUMIDITY:
        raise InputError(f"not an air sensor: {spec.kind}")
    t = t_true_c + spec.noise_sigma * noise.draw()
    t = round(float(np.clip(t, SENSOR_TEMP_MIN_C, SENSOR_TEMP_MAX_C)), 1)
    rh = rh_true_pct + spec.noise_sigma * noise.draw()
    rh = round(float(np.clip(rh, 0.0, 100.0)), 1)
    return (
        SensorReading(timestamp_s, sensor_id, AIR_TEMP_HUMIDITY, t, UNIT_DEG_C),
        SensorReading(timestamp_s, sensor_id, AIR_TEMP_HUMIDITY, rh, UNIT_PCT_RH),
    )
