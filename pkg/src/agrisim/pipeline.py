"""End-to-end orchestration of the two-arm season experiment.

Runs the sensor-driven and calendar-baseline irrigation arms over identical
weather and identical sensor-noise streams (paired comparison), pushes the
sensor-driven arm's consolidated telemetry through the lossy transport into
the channel store, dispatches alerts, and derives the season totals, the
threshold-validation report, and all exported artifact files.

Every output byte is determined by (scenario, seed); a JSON-lines manifest
lists file hashes plus the weather/noise stream hashes that prove the two
arms were paired.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from agrisim import alerting, decision, ingest, metrics, transport
from agrisim.fieldsim import NoiseStream, generate_weather
from agrisim.scenario import Scenario

MANIFEST_NAME = "manifest.jsonl"


@dataclass
class RunOutput:
    scenario_name: str
    totals: metrics.SeasonTotals
    report: metrics.MetricReport
    observations: dict[str, float]
    system_arm: decision.SeasonResult
    baseline_arm: decision.SeasonResult
    transport_stats: dict[str, transport.TransportStats]
    economics: dict[str, float]
    out_dir: Path | None = None


def _season_setup(scenario: Scenario, weather) -> decision.SeasonSetup:
    return decision.SeasonSetup(
        weather=weather,
        profile=scenario.profile,
        calendar=scenario.calendar,
        thresholds=scenario.thresholds,
        soil_sensor=scenario.soil_sensor,
        air_sensor=scenario.air_sensor,
        latitude_deg=scenario.season.latitude_deg,
        irrigation_cap_mm=scenario.irrigation.cap_mm,
        baseline_interval_days=scenario.baseline.interval_days,
        baseline_depth_mm=scenario.baseline.depth_mm,
        initial_depletion_mm=scenario.irrigation.initial_depletion_mm,
        field_id=scenario.field_id,
    )


def packets_from_samples(samples, topic: str) -> list[transport.TelemetryPacket]:
    """One consolidated packet per sampling interval, fixed field order."""
    return [transport.TelemetryPacket(
        sequence_no=i + 1, timestamp_s=ts, moisture_pct=m, temp_c=t,
        humidity_pct=rh, topic=topic)
        for i, (ts, m, t, rh) in enumerate(samples)]


def _weather_digest(weather) -> str:
    h = hashlib.sha256()
    for w in weather:
        h.update(np.array([w.t_min_c, w.t_max_c, w.rh_mean_pct, w.rain_mm],
                          dtype=np.float64).tobytes())
    return h.hexdigest()


def run_arms(scenario: Scenario):
    """Run both policy arms on shared weather and noise streams."""
    weather = generate_weather(scenario.season, scenario.seed)
    ss = np.random.SeedSequence(scenario.seed)
    sensor_ss, pubsub_ss, reqresp_ss = ss.spawn(3)
    setup = _season_setup(scenario, weather)
    system = decision.schedule_season(decision.SENSOR_DRIVEN, setup,
                                      NoiseStream(sensor_ss))
    baseline = decision.schedule_season(decision.CALENDAR_BASELINE, setup,
                                        NoiseStream(sensor_ss))
    return weather, system, baseline, pubsub_ss, reqresp_ss


def run_season(scenario: Scenario, out_dir=None) -> RunOutput:
    """Execute the full pipeline; write artifact files when out_dir is given."""
    weather, system, baseline, pubsub_ss, reqresp_ss = run_arms(scenario)
    topic = f"farm/{scenario.field_id}/telemetry"
    packets = packets_from_samples(system.samples, topic)
    days = scenario.season.days

    store = ingest.ChannelStore()
    store.create_channel(scenario.channel)
    chan_id = scenario.channel.channel_id
    write_key = scenario.channel.write_key

    def deliver_to_channel(packet, result):
        if result.delivered:
            store.ingest(chan_id, write_key, packet.timestamp_s,
                         (packet.moisture_pct, packet.temp_c,
                          packet.humidity_pct))

    stats_pubsub = transport.run_session(
        packets, transport.PUBSUB, scenario.qos, scenario.link,
        scenario.energy, np.random.default_rng(pubsub_ss), days=days,
        on_result=deliver_to_channel)
    stats_reqresp = transport.run_session(
        packets, transport.REQRESP, scenario.qos, scenario.link,
        scenario.energy, np.random.default_rng(reqresp_ss), days=days)

    catalog = alerting.MessageCatalog.default()
    dispatcher = alerting.Dispatcher(
        catalog, scenario.gateway, alerting.RecordingGatewayClient(),
        locale=scenario.alerting.locale,
        dedup_window_s=scenario.alerting.dedup_window_s)
    for alert in system.alerts:
        dispatcher.dispatch_alert(alert, alert.timestamp_s, scenario.field_id)

    ym = scenario.yield_model.max_yield_kg_per_acre
    ky = scenario.yield_model.ky
    yield_system = metrics.yield_from_water_stress(
        system.eta_total_mm, system.etm_total_mm, ky, ym)
    yield_baseline = metrics.yield_from_water_stress(
        baseline.eta_total_mm, baseline.etm_total_mm, ky, ym)

    water_system_l = system.irrigation_total_mm * metrics.LITERS_PER_ACRE_MM
    water_baseline_l = baseline.irrigation_total_mm * metrics.LITERS_PER_ACRE_MM

    totals = metrics.SeasonTotals(
        baseline_water_l_per_acre=water_baseline_l,
        system_water_l_per_acre=water_system_l,
        baseline_yield_kg_per_acre=yield_baseline,
        system_yield_kg_per_acre=yield_system,
        pubsub_energy_mwh=stats_pubsub.energy_mwh,
        reqresp_energy_mwh=stats_reqresp.energy_mwh,
        delivery_rate=stats_pubsub.delivery_rate,
        baseline_event_count=baseline.event_count,
        system_event_count=system.event_count,
    )

    per_msg = scenario.energy.energy_per_message_mwh[transport.PUBSUB]
    useful = stats_pubsub.delivered * per_msg
    energy_eff = transport.energy_efficiency_pct(useful, stats_pubsub.energy_mwh)

    samples = np.asarray(system.samples)
    observations = {
        "Temperature": float(samples[:, 2].max()),
        "Humidity": float(samples[:, 3].mean()),
        "Soil Moisture": float(samples[:, 1].mean()),
        "Data Transmission": stats_pubsub.delivery_rate * 100.0,
        "Water Usage": metrics.water_efficiency_pct(water_baseline_l,
                                                    water_system_l),
        "Crop Yield": metrics.yield_improvement_pct(yield_system,
                                                    yield_baseline),
        "Energy Efficiency": energy_eff,
    }
    report = metrics.build_report(observations, scenario.report_targets)

    econ = scenario.economics
    base_cost = (water_baseline_l * econ.water_cost_ugx_per_l
                 + baseline.event_count * econ.labor_cost_ugx_per_event)
    sys_cost = (water_system_l * econ.water_cost_ugx_per_l
                + system.event_count * econ.labor_cost_ugx_per_event)
    economics = {
        "baseline_cost_ugx": base_cost,
        "system_cost_ugx": sys_cost,
        "cost_savings_ugx": base_cost - sys_cost,
        "cost_savings_fraction_pct": (base_cost - sys_cost) / base_cost * 100.0,
        "revenue_gain_ugx": metrics.revenue_gain_ugx(
            max(yield_system - yield_baseline, 0.0),
            econ.maize_price_ugx_per_kg),
    }

    output = RunOutput(
        scenario_name=scenario.name, totals=totals, report=report,
        observations=observations, system_arm=system, baseline_arm=baseline,
        transport_stats={transport.PUBSUB: stats_pubsub,
                         transport.REQRESP: stats_reqresp},
        economics=economics,
    )

    if out_dir is not None:
        output.out_dir = Path(out_dir)
        _write_artifacts(output, scenario, weather, store, dispatcher)
    return output


def _write_ground_truth_csv(path, weather, arm: decision.SeasonResult):
    import csv
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day_index", "day_of_year", "t_min_c", "t_max_c",
                         "rh_mean_pct", "rain_mm", "depletion_mm",
                         "moisture_pct"])
        for w, d in zip(weather, arm.daily):
            writer.writerow([w.day_index, w.day_of_year, repr(w.t_min_c),
                             repr(w.t_max_c), repr(w.rh_mean_pct),
                             repr(w.rain_mm), repr(d.depletion_end_mm),
                             repr(d.moisture_end_pct)])


def _write_irrigation_log(path, system: decision.SeasonResult,
                          baseline: decision.SeasonResult):
    import csv
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day", "policy", "depth_mm", "trigger_reason"])
        for arm in (system, baseline):
            for e in arm.events:
                writer.writerow([e.day_index, arm.policy, repr(e.depth_mm),
                                 e.reason])


def write_transport_csv(path, stats_by_protocol: dict):
    import csv
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["protocol", "attempted", "delivered",
                         "retransmissions", "bytes_sent", "energy_mwh",
                         "mean_latency_s", "delivery_rate"])
        for proto in (transport.PUBSUB, transport.REQRESP):
            s = stats_by_protocol[proto]
            writer.writerow([proto, s.attempted, s.delivered,
                             s.retransmissions, s.bytes_sent,
                             repr(s.energy_mwh), repr(s.mean_latency_s),
                             repr(s.delivery_rate)])


def _write_artifacts(output: RunOutput, scenario: Scenario, weather, store,
                     dispatcher):
    out = output.out_dir
    out.mkdir(parents=True, exist_ok=True)

    _write_ground_truth_csv(out / "ground_truth_system.csv", weather,
                            output.system_arm)
    _write_ground_truth_csv(out / "ground_truth_baseline.csv", weather,
                            output.baseline_arm)
    _write_irrigation_log(out / "irrigation_log.csv", output.system_arm,
                          output.baseline_arm)
    store.export_csv(scenario.channel.channel_id, out / "channel_export.csv")
    store.snapshot_jsonl(scenario.channel.channel_id,
                         out / "channel_snapshot.jsonl")
    dispatcher.export_csv(out / "dispatch_log.csv")
    write_transport_csv(out / "transport_stats.csv", output.transport_stats)
    (out / "report.txt").write_text(metrics.format_report_table(output.report))
    metrics.export_report_csv(output.report, out / "report.csv")
    metrics.export_radar_csv(output.report, out / "radar.csv")

    totals = output.totals
    (out / "totals.json").write_text(json.dumps({
        "scenario": output.scenario_name,
        "observations": output.observations,
        "report_targets": scenario.report_targets,
        "totals": {
            "baseline_water_l_per_acre": totals.baseline_water_l_per_acre,
            "system_water_l_per_acre": totals.system_water_l_per_acre,
            "baseline_yield_kg_per_acre": totals.baseline_yield_kg_per_acre,
            "system_yield_kg_per_acre": totals.system_yield_kg_per_acre,
            "pubsub_energy_mwh": totals.pubsub_energy_mwh,
            "reqresp_energy_mwh": totals.reqresp_energy_mwh,
            "delivery_rate": totals.delivery_rate,
            "baseline_event_count": totals.baseline_event_count,
            "system_event_count": totals.system_event_count,
        },
        "economics": output.economics,
    }, sort_keys=True, indent=2) + "\n")

    manifest_entries = []
    for path in sorted(out.iterdir()):
        if path.name == MANIFEST_NAME or not path.is_file():
            continue
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        manifest_entries.append({"file": path.name, "sha256": digest})
    manifest_entries.append({"stream": "weather",
                             "sha256": _weather_digest(weather)})
    manifest_entries.append({"stream": "sensor_noise_system",
                             "sha256": output.system_arm.noise_digest})
    manifest_entries.append({"stream": "sensor_noise_baseline",
                             "sha256": output.baseline_arm.noise_digest})
    with (out / MANIFEST_NAME).open("w") as fh:
        for entry in manifest_entries:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")


def bench_transport(scenario: Scenario, out_path=None):
    """Run both protocols over an identical packet stream and compare."""
    weather, system, _baseline, pubsub_ss, reqresp_ss = run_arms(scenario)
    topic = f"farm/{scenario.field_id}/telemetry"
    packets = packets_from_samples(system.samples, topic)
    days = scenario.season.days
    stats = {
        transport.PUBSUB: transport.run_session(
            packets, transport.PUBSUB, scenario.qos, scenario.link,
            scenario.energy, np.random.default_rng(pubsub_ss), days=days),
        transport.REQRESP: transport.run_session(
            packets, transport.REQRESP, scenario.qos, scenario.link,
            scenario.energy, np.random.default_rng(reqresp_ss), days=days),
    }
    if out_path is not None:
        write_transport_csv(out_path, stats)
    return stats
