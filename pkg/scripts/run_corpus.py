#!/usr/bin/env python3
"""Run the six-example regression corpus and print a detailed table."""

import argparse
import sys
import time

from perturbkit.corpus import EXAMPLE_IDS, run_example
from perturbkit.quadrature import DEFAULT_QUAD, QuadratureConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ids", type=int, nargs="*", default=EXAMPLE_IDS)
    parser.add_argument("--abs-tol", type=float, default=DEFAULT_QUAD.abs_tol)
    args = parser.parse_args()

    cfg = QuadratureConfig(abs_tol=args.abs_tol,
                           rel_tol=DEFAULT_QUAD.rel_tol,
                           max_subdivisions=DEFAULT_QUAD.max_subdivisions)
    t0 = time.time()
    failures = 0
    for example_id in args.ids:
        report = run_example(example_id, cfg)
        print(f"== example {example_id}: {report.title}")
        for check in report.checks:
            mark = "ok " if check.passed else "FAIL"
            print(f"  {mark} {check.name:<50s} err={check.error:.2e} "
                  f"tol={check.tol:g} [{check.provenance}]")
            if check.note:
                print(f"       note: {check.note}")
            failures += 0 if check.passed else 1
    print(f"\ntotal {time.time() - t0:.2f}s, {failures} failing checks")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
