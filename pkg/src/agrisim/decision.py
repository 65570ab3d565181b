"""Irrigation decision engine.

Implements the crop-water-requirement chain (extraterrestrial radiation ->
Hargreaves reference evapotranspiration -> staged crop coefficient -> crop
water use), the threshold rules that turn sensor readings into irrigation
advice and environmental alerts, and the season scheduler that runs either
the sensor-driven policy or a fixed-calendar baseline over a weather
trajectory.

Hargreaves is used for reference ET because the modeled sensor suite measures
only temperature and humidity; it needs nothing beyond daily temperature
extremes and latitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from agrisim.errors import ConfigurationError, InputError
from agrisim.fieldsim import (
    FieldState,
    NoiseStream,
    SensorSpec,
    SoilProfile,
    WeatherDay,
    depletion_to_moisture_pct,
    moisture_pct_to_depletion,
    sample_air_sensor,
    sample_soil_sensor,
    step_soil_water,
)

SOLAR_CONSTANT_MJ = 0.0820  # MJ m-2 min-1
RA_TO_MM = 0.408            # evaporation equivalent of 1 MJ m-2 day-1

SENSOR_DRIVEN = "SENSOR_DRIVEN"
CALENDAR_BASELINE = "CALENDAR_BASELINE"

IRRIGATE = "IRRIGATE"
NONE = "NONE"

HEAT = "HEAT"
HUMIDITY_LOW = "HUMIDITY_LOW"
HUMIDITY_HIGH = "HUMIDITY_HIGH"
MOISTURE_LOW = "MOISTURE_LOW"

SECONDS_PER_DAY = 86_400


def extraterrestrial_radiation(latitude_deg: float, day_of_year: int) -> float:
    """Daily extraterrestrial radiation Ra in MJ m-2 day-1.

    Standard solar geometry: inverse relative earth-sun distance, solar
    declination, and sunset hour angle. Valid away from polar latitudes.
    """
    if not -66.0 <= latitude_deg <= 66.0:
        raise InputError(f"latitude outside [-66, 66]: {latitude_deg}")
    if not 1 <= day_of_year <= 365:
        raise InputError(f"day_of_year outside [1, 365]: {day_of_year}")
    phi = math.radians(latitude_deg)
    dr = 1.0 + 0.033 * math.cos(2.0 * math.pi * day_of_year / 365.0)
    decl = 0.409 * math.sin(2.0 * math.pi * day_of_year / 365.0 - 1.39)
    ws = math.acos(-math.tan(phi) * math.tan(decl))
    return (24.0 * 60.0 / math.pi) * SOLAR_CONSTANT_MJ * dr * (
        ws * math.sin(phi) * math.sin(decl)
        + math.cos(phi) * math.cos(decl) * math.sin(ws))


def et0_hargreaves(t_min_c: float, t_max_c: float, latitude_deg: float,
                   day_of_year: int) -> float:
    """Hargreaves reference evapotranspiration in mm/day, clamped at 0."""
    if t_min_c > t_max_c:
        raise InputError(f"t_min > t_max: {t_min_c} > {t_max_c}")
    ra_mm = RA_TO_MM * extraterrestrial_radiation(latitude_deg, day_of_year)
    t_mean = (t_min_c + t_max_c) / 2.0
    et0 = 0.0023 * ra_mm * (t_mean + 17.8) * math.sqrt(t_max_c - t_min_c)
    return max(et0, 0.0)


@dataclass(frozen=True)
class CropCalendar:
    """Growth-stage lengths and crop coefficients.

    Kc is constant in the initial and mid stages and linearly interpolated
    across the development and late stages.
    """

    initial_days: int
    development_days: int
    mid_days: int
    late_days: int
    kc_initial: float = 0.30
    kc_mid: float = 1.20
    kc_end: float = 0.35

    def __post_init__(self):
        for n in (self.initial_days, self.development_days, self.mid_days,
                  self.late_days):
            if n <= 0:
                raise ConfigurationError("stage lengths must be positive")
        for kc in (self.kc_initial, self.kc_mid, self.kc_end):
            if not 0.0 < kc < 2.0:
                raise ConfigurationError(f"kc outside (0, 2): {kc}")

    @property
    def season_total_days(self) -> int:
        return (self.initial_days + self.development_days + self.mid_days
                + self.late_days)

    @classmethod
    def maize(cls, season_days: int, kc_initial: float = 0.30,
              kc_mid: float = 1.20, kc_end: float = 0.35) -> "CropCalendar":
        """Standard maize stage proportions (20/35/40/25 of a 120-day crop)
        scaled to the scenario season length."""
        base = (20, 35, 40, 25)
        total = sum(base)
        lengths = [max(1, round(b * season_days / total)) for b in base]
        lengths[-1] += season_days - sum(lengths)
        if lengths[-1] < 1:
            raise ConfigurationError(f"season too short: {season_days} days")
        return cls(*lengths, kc_initial=kc_initial, kc_mid=kc_mid, kc_end=kc_end)

    def kc_for_day(self, day_index: int) -> float:
        """Kc for a 0-based day within the season."""
        if not 0 <= day_index < self.season_total_days:
            raise InputError(
                f"day {day_index} outside season of {self.season_total_days} days")
        d = day_index
        if d < self.initial_days:
            return self.kc_initial
        d -= self.initial_days
        if d < self.development_days:
            frac = (d + 1) / (self.development_days + 1)
            return self.kc_initial + frac * (self.kc_mid - self.kc_initial)
        d -= self.development_days
        if d < self.mid_days:
            return self.kc_mid
        d -= self.mid_days
        frac = (d + 1) / (self.late_days + 1)
        return self.kc_mid + frac * (self.kc_end - self.kc_mid)


def crop_et(et0_mm: float, day_index: int, calendar: CropCalendar) -> float:
    """Crop water use ETc = Kc(stage) * ET0, in mm/day."""
    return calendar.kc_for_day(day_index) * et0_mm


@dataclass(frozen=True)
class Thresholds:
    """Rule thresholds for advice and alerts.

    The moisture trigger is strict: readings exactly at the trigger do not
    fire ("below" is read literally).
    """

    soil_moisture_trigger_pct: float = 25.0
    temp_alert_c: float = 35.0
    humidity_range_pct: tuple[float, float] = (30.0, 60.0)

    def __post_init__(self):
        # 0 is allowed and disables the strict "below" rule entirely
        if not 0.0 <= self.soil_moisture_trigger_pct < 100.0:
            raise ConfigurationError("moisture trigger must be in [0, 100)")
        if self.humidity_range_pct[0] >= self.humidity_range_pct[1]:
            raise ConfigurationError(
                f"humidity range reversed: {self.humidity_range_pct}")


@dataclass(frozen=True)
class IrrigationAdvice:
    field_id: str
    timestamp_s: float
    action: str
    depth_mm: float
    reason: str
    observed_moisture_pct: float

    def __post_init__(self):
        if (self.depth_mm > 0.0) != (self.action == IRRIGATE):
            raise ConfigurationError("depth_mm must be positive iff IRRIGATE")


@dataclass(frozen=True)
class Alert:
    kind: str
    severity: str
    observed: float
    threshold: float
    timestamp_s: float = 0.0


def refill_depth(state: FieldState, profile: SoilProfile,
                 cap_mm: float) -> float:
    """Application depth that refills the root zone, capped per event."""
    return min(state.depletion_mm, cap_mm)


def evaluate(readings: dict, thresholds: Thresholds, field_state: FieldState,
             profile: SoilProfile, cap_mm: float = 25.0,
             field_id: str = "field-1", timestamp_s: float = 0.0
             ) -> tuple[IrrigationAdvice, list[Alert]]:
    """Apply the threshold rules to the latest reading set.

    ``readings`` must provide moisture_pct, temp_c and humidity_pct. Returns
    irrigation advice (IRRIGATE with a refill depth, or NONE) plus zero or
    more environmental alerts, each carrying the observed value and the
    threshold it crossed.
    """
    missing = {"moisture_pct", "temp_c", "humidity_pct"} - readings.keys()
    if missing:
        raise InputError(f"incomplete reading set, missing: {sorted(missing)}")
    moisture = readings["moisture_pct"]
    temp = readings["temp_c"]
    humidity = readings["humidity_pct"]

    alerts: list[Alert] = []
    if temp > thresholds.temp_alert_c:
        alerts.append(Alert(HEAT, "high", temp, thresholds.temp_alert_c,
                            timestamp_s))
    rh_lo, rh_hi = thresholds.humidity_range_pct
    if humidity < rh_lo:
        alerts.append(Alert(HUMIDITY_LOW, "medium", humidity, rh_lo, timestamp_s))
    elif humidity > rh_hi:
        alerts.append(Alert(HUMIDITY_HIGH, "medium", humidity, rh_hi, timestamp_s))

    trigger = thresholds.soil_moisture_trigger_pct
    if moisture < trigger:
        alerts.append(Alert(MOISTURE_LOW, "high", moisture, trigger, timestamp_s))
        depth = refill_depth(field_state, profile, cap_mm)
        if depth > 0.0:
            advice = IrrigationAdvice(
                field_id, timestamp_s, IRRIGATE, depth,
                f"soil moisture {moisture:.1f}% below trigger {trigger:.0f}%",
                moisture)
            return advice, alerts
    return (IrrigationAdvice(field_id, timestamp_s, NONE, 0.0,
                             "all thresholds satisfied", moisture), alerts)


@dataclass(frozen=True)
class IrrigationEvent:
    day_index: int
    timestamp_s: float
    depth_mm: float
    observed_moisture_pct: float
    reason: str


@dataclass(frozen=True)
class DailyRecord:
    day_index: int
    depletion_start_mm: float
    depletion_end_mm: float
    etc_mm: float
    eta_mm: float
    drainage_mm: float
    irrigation_mm: float
    moisture_end_pct: float


@dataclass
class SeasonResult:
    """Outcome of one policy arm over one season."""

    policy: str
    events: list[IrrigationEvent] = field(default_factory=list)
    daily: list[DailyRecord] = field(default_factory=list)
    samples: list[tuple[float, float, float, float]] = field(default_factory=list)
    advices: list[IrrigationAdvice] = field(default_factory=list)
    alerts: list[Alert] = field(default_factory=list)
    irrigation_total_mm: float = 0.0
    eta_total_mm: float = 0.0
    etm_total_mm: float = 0.0
    noise_digest: str = ""

    @property
    def event_count(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class SeasonSetup:
    """Everything one policy arm needs to run a season."""

    weather: list[WeatherDay]
    profile: SoilProfile
    calendar: CropCalendar
    thresholds: Thresholds
    soil_sensor: SensorSpec
    air_sensor: SensorSpec
    latitude_deg: float
    irrigation_cap_mm: float = 25.0
    baseline_interval_days: int = 4
    baseline_depth_mm: float = 12.0
    initial_depletion_mm: float = 0.0
    field_id: str = "field-1"


def _diurnal_temp(w: WeatherDay, hour: float) -> float:
    """Sinusoidal diurnal cycle between the day's extremes, peaking at 14:00."""
    half_range = (w.t_max_c - w.t_min_c) / 2.0
    return w.t_mean_c + half_range * math.cos(2.0 * math.pi * (hour - 14.0) / 24.0)


def schedule_season(policy: str, setup: SeasonSetup,
                    noise: NoiseStream) -> SeasonResult:
    """Run one policy arm over the season.

    SENSOR_DRIVEN evaluates the threshold rules at every sampling step on
    noisy sensor readings (ground truth interpolated between daily states)
    and applies at most one irrigation event per calendar day, sized from the
    sensed depletion up to the per-event cap. CALENDAR_BASELINE irrigates a
    fixed depth on a fixed day interval regardless of state.

    The soil balance itself advances daily; irrigation decided mid-day is
    applied within that day's step.
    """
    if policy not in (SENSOR_DRIVEN, CALENDAR_BASELINE):
        raise InputError(f"unknown policy: {policy}")

    result = SeasonResult(policy=policy)
    state = FieldState(depletion_mm=setup.initial_depletion_mm)
    interval = setup.soil_sensor.sample_interval_s
    samples_per_day = SECONDS_PER_DAY // interval
    taw = setup.profile.taw_mm

    for w in setup.weather:
        et0 = et0_hargreaves(w.t_min_c, w.t_max_c, setup.latitude_deg,
                             w.day_of_year)
        etc = crop_et(et0, w.day_index, setup.calendar)

        # no-irrigation projection used to interpolate within-day ground truth
        projected = step_soil_water(state, w, 0.0, etc, setup.profile)
        dep0, dep1 = state.depletion_mm, projected.depletion_mm

        irrigation_today = 0.0
        if policy == CALENDAR_BASELINE and w.day_index % setup.baseline_interval_days == 0:
            irrigation_today = setup.baseline_depth_mm
            result.events.append(IrrigationEvent(
                w.day_index, w.day_index * SECONDS_PER_DAY,
                setup.baseline_depth_mm, float("nan"), "calendar interval"))

        for k in range(samples_per_day):
            ts = w.day_index * SECONDS_PER_DAY + (k + 1) * interval
            hour = ((k + 1) * interval % SECONDS_PER_DAY) / 3600.0
            frac = (k + 1) / samples_per_day
            true_dep = dep0 + frac * (dep1 - dep0)
            true_moist = depletion_to_moisture_pct(min(true_dep, taw),
                                                   setup.profile)
            m_reading = sample_soil_sensor(true_moist, setup.soil_sensor,
                                           noise, ts)
            t_reading, rh_reading = sample_air_sensor(
                _diurnal_temp(w, hour), w.rh_mean_pct, setup.air_sensor,
                noise, ts)
            result.samples.append((ts, m_reading.value, t_reading.value,
                                   rh_reading.value))

            if policy != SENSOR_DRIVEN:
                continue
            sensed_dep = min(max(
                moisture_pct_to_depletion(m_reading.value, setup.profile),
                0.0), taw)
            advice, alerts = evaluate(
                {"moisture_pct": m_reading.value, "temp_c": t_reading.value,
                 "humidity_pct": rh_reading.value},
                setup.thresholds,
                FieldState(depletion_mm=sensed_dep, day_index=w.day_index),
                setup.profile, cap_mm=setup.irrigation_cap_mm,
                field_id=setup.field_id, timestamp_s=ts)
            result.alerts.extend(alerts)
            if advice.action == IRRIGATE and irrigation_today == 0.0:
                irrigation_today = advice.depth_mm
                result.advices.append(advice)
                result.events.append(IrrigationEvent(
                    w.day_index, ts, advice.depth_mm,
                    advice.observed_moisture_pct, advice.reason))

        new_state = step_soil_water(state, w, irrigation_today, etc,
                                    setup.profile)
        result.daily.append(DailyRecord(
            day_index=w.day_index,
            depletion_start_mm=state.depletion_mm,
            depletion_end_mm=new_state.depletion_mm,
            etc_mm=etc,
            eta_mm=new_state.cumulative_eta_mm - state.cumulative_eta_mm,
            drainage_mm=(new_state.cumulative_drainage_mm
                         - state.cumulative_drainage_mm),
            irrigation_mm=irrigation_today,
            moisture_end_pct=depletion_to_moisture_pct(
                new_state.depletion_mm, setup.profile),
        ))
        result.etm_total_mm += etc
        state = new_state

    result.irrigation_total_mm = state.cumulative_irrigation_mm
    result.eta_total_mm = state.cumulative_eta_mm
    result.noise_digest = noise.digest()
    return result
