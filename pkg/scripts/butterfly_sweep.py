#!/usr/bin/env python3
"""Sweep the bottom of the Hofstadter butterfly over all rational fluxes.

For every coprime M/N up to a maximal period, tightens the local-energy
enclosure from the flat test vector, compares it with the Jacobi oracle and
writes one CSV per coupling strength. The printed summary is the worst
enclosure width and the worst oracle slack over the sweep, both of which
should sit at the tightening tolerance and below zero respectively.
"""

import argparse
import pathlib

from localbound.core import OptimizerConfig
from localbound.discrete import coprime_fractions, hofstadter_bottom


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=9)
    parser.add_argument("--v0", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--tolerance", type=float, default=1e-8)
    parser.add_argument("--out-dir", default="butterfly_out")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fractions = coprime_fractions(args.n_max)
    config = OptimizerConfig(max_iterations=100000, tolerance=args.tolerance)
    print(f"{len(fractions)} fluxes up to N = {args.n_max}")

    for v0 in args.v0:
        rows = hofstadter_bottom(fractions, v0, config, jobs=args.jobs)
        path = out_dir / f"bottom_v0_{v0:g}.csv"
        with open(path, "w") as handle:
            handle.write("M,N,lower,upper,exact\n")
            for m, n, lower, upper, exact in rows:
                handle.write(f"{m},{n},{lower:.17g},{upper:.17g},{exact:.17g}\n")
        worst_width = max(upper - lower for _, _, lower, upper, _ in rows)
        worst_slack = max(max(lower - exact, exact - upper)
                          for _, _, lower, upper, exact in rows)
        print(f"V0 = {v0:g}: wrote {path}, worst width {worst_width:.2e}, "
              f"worst oracle slack {worst_slack:.2e}")


if __name__ == "__main__":
    main()
