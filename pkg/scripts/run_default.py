#!/usr/bin/env python3
"""Run the default two-arm season and print the headline numbers.

Equivalent to ``agrisim run <default scenario> --out out_mubende_dry`` but
handy when working from a checkout without the console script installed.
"""

import argparse
from pathlib import Path

from agrisim import pipeline
from agrisim.scenario import default_scenario_path, load_scenario


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out_mubende_dry",
                        help="artifact directory (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
    args = parser.parse_args()

    with default_scenario_path() as path:
        scenario = load_scenario(path)
    if args.seed is not None:
        import dataclasses
        scenario = dataclasses.replace(scenario, seed=args.seed)

    output = pipeline.run_season(scenario, out_dir=Path(args.out))
    t = output.totals
    print(f"scenario {scenario.name} (seed {scenario.seed})")
    print(f"  water   baseline {t.baseline_water_l_per_acre:10.0f} L/acre "
          f"({t.baseline_event_count} events)")
    print(f"          system   {t.system_water_l_per_acre:10.0f} L/acre "
          f"({t.system_event_count} events)  "
          f"-> {output.observations['Water Usage']:.1f}% reduction")
    print(f"  yield   baseline {t.baseline_yield_kg_per_acre:8.1f} kg/acre")
    print(f"          system   {t.system_yield_kg_per_acre:8.1f} kg/acre  "
          f"-> {output.observations['Crop Yield']:.1f}% increase")
    print(f"  energy  pubsub {t.pubsub_energy_mwh:.1f} mWh, "
          f"reqresp {t.reqresp_energy_mwh:.1f} mWh")
    print(f"  delivery rate {t.delivery_rate:.4f}, "
          f"energy efficiency {output.observations['Energy Efficiency']:.1f}%")
    print(f"  cost savings {output.economics['cost_savings_ugx']:.0f} UGX "
          f"({output.economics['cost_savings_fraction_pct']:.1f}%), "
          f"revenue gain {output.economics['revenue_gain_ugx']:.0f} UGX")
    print(f"  artifacts in {args.out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
