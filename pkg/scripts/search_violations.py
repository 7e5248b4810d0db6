#!/usr/bin/env python3
"""Hunt for energy-condition counterexamples with a sign-flipped Lagrangian.

Runs a violation-search campaign on linear_combination(1, -5, 0), whose
negative second coefficient breaks energy positivity, persists every recorded
fixture to --out, and replays each one to confirm the determinism contract.
"""

import argparse
import sys
from pathlib import Path

from straindec import CampaignConfig, replay_fixture, run_campaign
from straindec.campaign import write_json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="violations", help="fixture directory")
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--max-fixtures", type=int, default=10)
    args = parser.parse_args()

    config = CampaignConfig(
        m_plus_1=3,
        n=3,
        lagrangian_name="linear_combination",
        lagrangian_parameters={"coefficients": [1.0, -5.0, 0.0]},
        num_samples=args.samples,
        num_directions_per_sample=4,
        seed=args.seed,
        mode="violation_search",
        max_fixtures=args.max_fixtures,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = run_campaign(config, out_path=out_dir / "report.json")
    print(f"failures counted: {report.failures_total}")
    print(f"fixtures recorded: {len(report.fixtures)}")

    mismatches = 0
    for i, fixture in enumerate(report.fixtures):
        path = out_dir / f"fixture_{i:03d}.json"
        write_json(path, fixture)
        result = replay_fixture(path)
        status = "ok" if result.matches else "MISMATCH"
        mismatches += not result.matches
        print(f"  {path} kind={result.kind} replay={status}")
    if mismatches:
        print(f"{mismatches} fixtures failed to replay", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
