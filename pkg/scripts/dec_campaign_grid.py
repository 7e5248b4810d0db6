#!/usr/bin/env python3
"""Run the dominant-energy-condition campaign grid over the built-in catalog.

Sweeps five reference Lagrangians over source dimensions (m+1) in {2,3,4} and
target dimensions n in {1,2,3,4}, printing one row per cell with failure
counts and worst margins.  Defaults are desk scale; raise --samples for the
full gate.
"""

import argparse
import itertools
import sys

from straindec import CampaignConfig, run_campaign

LAGRANGIANS = [
    ("wave_map", {}),
    ("skyrme", {"c1": 1.0, "c2": 1.0}),
    ("skyrme", {"c1": 2.0, "c2": 0.5}),
    ("linear_combination", {"coefficients": [1.0, 1.0, 1.0]}),
    ("born_infeld", {"b": 10.0}),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--directions", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    print(f"{'lagrangian':<24} {'params':<28} {'m+1':>3} {'n':>2} "
          f"{'dec fail':>8} {'min energy':>12} {'max flux':>12} {'accept':>7}")
    total_fail = 0
    for li, (name, params) in enumerate(LAGRANGIANS):
        for di, (m1, n) in enumerate(itertools.product((2, 3, 4), (1, 2, 3, 4))):
            config = CampaignConfig(
                m_plus_1=m1,
                n=n,
                lagrangian_name=name,
                lagrangian_parameters=params,
                num_samples=args.samples,
                num_directions_per_sample=args.directions,
                seed=args.seed + 100 * li + di,
            )
            report = run_campaign(config, jobs=args.jobs)
            fail = (report.counts["dec_energy"]["fail"]
                    + report.counts["dec_flux"]["fail"])
            total_fail += fail
            margins = report.margins
            e = margins["min_energy_margin"]
            q = margins["max_flux_quadratic_margin"]
            draws = report.sampling["domain_draws"]
            rate = report.sampling["domain_accepted"] / draws if draws else 1.0
            print(f"{name:<24} {str(params):<28} {m1:>3} {n:>2} {fail:>8} "
                  f"{e if e is not None else float('nan'):>12.3e} "
                  f"{q if q is not None else float('nan'):>12.3e} {rate:>7.3f}")
    print(f"total DEC failures: {total_fail}")
    return 1 if total_fail else 0


if __name__ == "__main__":
    sys.exit(main())
