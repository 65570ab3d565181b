"""Command-line entry point.

Subcommands:
  run <scenario> [--out DIR] [--seed N]   full two-arm season + artifacts
  bench-transport <scenario> [--out FILE] per-protocol transport comparison
  report <out-dir>                        re-render tables from stored totals
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from agrisim import metrics, pipeline, transport
from agrisim.errors import AgrisimError
from agrisim.scenario import load_scenario


def _load(path: str, seed_override):
    scenario = load_scenario(path)
    if seed_override is not None:
        scenario = dataclasses.replace(scenario, seed=seed_override)
    return scenario


def cmd_run(args) -> int:
    scenario = _load(args.scenario, args.seed)
    out_dir = Path(args.out) if args.out else Path(f"out_{scenario.name}")
    output = pipeline.run_season(scenario, out_dir=out_dir)
    print(f"scenario: {scenario.name}  seed: {scenario.seed}")
    print(metrics.format_report_table(output.report))
    t = output.totals
    print(f"water:  baseline {t.baseline_water_l_per_acre:.0f} L/acre, "
          f"system {t.system_water_l_per_acre:.0f} L/acre "
          f"({output.observations['Water Usage']:.1f}% reduction)")
    print(f"yield:  baseline {t.baseline_yield_kg_per_acre:.0f} kg/acre, "
          f"system {t.system_yield_kg_per_acre:.0f} kg/acre "
          f"({output.observations['Crop Yield']:.1f}% increase)")
    print(f"energy: pubsub {t.pubsub_energy_mwh:.1f} mWh, "
          f"reqresp {t.reqresp_energy_mwh:.1f} mWh")
    print(f"delivery rate: {t.delivery_rate:.4f}")
    print(f"artifacts: {out_dir}/")
    return 0


def cmd_bench_transport(args) -> int:
    scenario = _load(args.scenario, args.seed)
    out_path = args.out
    stats = pipeline.bench_transport(scenario, out_path=out_path)
    ps, rr = stats[transport.PUBSUB], stats[transport.REQRESP]
    for name, s in ((transport.PUBSUB, ps), (transport.REQRESP, rr)):
        print(f"{name:8s} attempted={s.attempted} delivered={s.delivered} "
              f"rate={s.delivery_rate:.4f} energy={s.energy_mwh:.2f} mWh "
              f"latency={s.mean_latency_s:.1f} s")
    print(f"energy ratio (pubsub/reqresp): {ps.energy_mwh / rr.energy_mwh:.4f}")
    if out_path:
        print(f"stats written to {out_path}")
    return 0


def cmd_report(args) -> int:
    totals_path = Path(args.out_dir) / "totals.json"
    if not totals_path.exists():
        raise AgrisimError(f"no totals.json under {args.out_dir}")
    data = json.loads(totals_path.read_text())
    report = metrics.build_report(data["observations"], data["report_targets"])
    print(f"scenario: {data['scenario']}")
    print(metrics.format_report_table(report))
    econ = data["economics"]
    print(f"cost savings: {econ['cost_savings_ugx']:.0f} UGX "
          f"({econ['cost_savings_fraction_pct']:.1f}% of baseline cost)")
    print(f"revenue gain: {econ['revenue_gain_ugx']:.0f} UGX")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agrisim",
        description="Deterministic smart-irrigation pipeline simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the two-arm season simulation")
    p_run.add_argument("scenario", help="scenario YAML path")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("bench-transport",
                             help="compare transport protocols")
    p_bench.add_argument("scenario", help="scenario YAML path")
    p_bench.add_argument("--out", help="CSV output path")
    p_bench.add_argument("--seed", type=int, help="override the scenario seed")
    p_bench.set_defaults(func=cmd_bench_transport)

    p_rep = sub.add_parser("report", help="re-render report from a run dir")
    p_rep.add_argument("out_dir", help="directory written by 'run'")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AgrisimError as exc:
        print(f"error [{exc.__class__.__name__}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
