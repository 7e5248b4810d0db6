#!/usr/bin/env python3
"""Audit the declared flags of every built-in Lagrangian by domain sampling.

Prints one table per built-in.  Expected output: all audits clean except
born_infeld's sub-additivity, which genuinely fails once the sample box
allows invariant vectors of mixed sign; rerunning it with --low 0 confirms
the nonnegative cone is clean.
"""

import argparse
import sys

from straindec import box_rejection_sampler, resolve_lagrangian, verify_flags

BUILTINS = [
    ("wave_map", {}, 3),
    ("skyrme", {"c1": 1.0, "c2": 1.0}, 4),
    ("born_infeld", {"b": 10.0}, 4),
    ("linear_combination", {"coefficients": [0.5, 1.0, 2.0]}, 3),
    ("minimal_surface", {}, 2),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--low", type=float, default=-5.0)
    parser.add_argument("--high", type=float, default=5.0)
    args = parser.parse_args()

    defects = 0
    for name, params, dim in BUILTINS:
        spec = resolve_lagrangian(name, params, dim)
        sampler = box_rejection_sampler(spec, low=args.low, high=args.high)
        report = verify_flags(spec, args.samples, sampler=sampler, seed=args.seed)
        print(f"{name} (dim {dim}, params {params})")
        for check in report.checks:
            verdict = "pass" if check.passed else "FAIL"
            print(f"  {check.name:<22} {verdict}  total={check.total:<6} "
                  f"violations={check.violations:<6} "
                  f"worst={check.worst_margin: .3e}")
        if report.flag_mismatches:
            defects += len(report.flag_mismatches)
            print(f"  declared flags refuted: {', '.join(report.flag_mismatches)}")
        if report.admissibility_failures:
            defects += len(report.admissibility_failures)
            print("  admissibility failures: "
                  f"{', '.join(report.admissibility_failures)}")
        print()
    print(f"defects found: {defects}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
