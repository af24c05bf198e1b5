#!/usr/bin/env python3
"""Scan the scattering coefficient over an energy grid and print a table.

Defaults to the coincident delta coupling on the line, where the closed
kernel form provides an exact cross-check column.
"""

import argparse
import cmath
import math
import sys

from perturbkit.corpus import ex6_kernel_coefficient, ex6_spec
from perturbkit.scattering import smatrix


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=complex, default=-2.0 + 0.5j)
    parser.add_argument("--grid", default="0.5:20:12", help="a:b:n")
    args = parser.parse_args()

    a, b, n = args.grid.split(":")
    a, b, n = float(a), float(b), int(n)
    energies = [a + (b - a) * k / (n - 1) for k in range(n)]

    spec = ex6_spec(args.alpha)
    print(f"alpha = {args.alpha}")
    print(f"{'lam':>8} {'Re S':>12} {'Im S':>12} {'|S|':>10} {'arg S':>10} "
          f"{'|S - closed|':>12}")
    for lam in energies:
        s = smatrix(spec, lam)
        k = math.sqrt(lam)
        closed = (ex6_kernel_coefficient(args.alpha, k)
                  / ex6_kernel_coefficient(args.alpha, -k))
        print(f"{lam:>8.3f} {s.value.real:>12.8f} {s.value.imag:>12.8f} "
              f"{abs(s.value):>10.8f} {cmath.phase(s.value):>10.6f} "
              f"{abs(s.value - closed):>12.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
