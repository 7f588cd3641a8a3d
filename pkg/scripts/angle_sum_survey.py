#!/usr/bin/env python3
"""Survey the best-found vertex-angle cosine maxima and their energy bounds.

Runs the multi-start ascent for N = 3..8, prints the best value against the
known reference geometry where one exists, the per-triangle density (which
must be nonincreasing and at most 1/4), and the resulting ground-energy
enclosures for identical attractive Coulomb particles. Finishes with the
uniform-sphere density trend toward 2/9.
"""

import argparse

from localbound.core import OptimizerConfig
from localbound.manybody import (BEST_KNOWN_ANGLE_SUM, identical_coulomb_bounds,
                                 maximize_angle_sum, sphere_angle_density)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--restarts", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-iterations", type=int, default=3000)
    args = parser.parse_args()

    config = OptimizerConfig(restarts=args.restarts, seed=args.seed,
                             max_iterations=args.max_iterations)
    print(f"{'N':>2}  {'best found':>16}  {'reference':>16}  {'density':>10}")
    for n in range(3, 9):
        best, _ = maximize_angle_sum(n, 3, config)
        reference = BEST_KNOWN_ANGLE_SUM.get(n)
        ref_text = f"{reference:16.10f}" if reference is not None else " " * 16
        print(f"{n:>2}  {best:16.10f}  {ref_text}  {best / (n * (n - 1) * (n - 2)):10.7f}")

    print("\nground-energy enclosures, identical Coulomb particles (d = 3):")
    for n in (5, 8, 12, 20):
        proved = identical_coulomb_bounds(n, 3, "lemma3")
        sharper = identical_coulomb_bounds(n, 3, "c8") if n >= 8 else None
        line = f"N = {n:>2}: proved [{proved.lower:.6f}, {proved.upper:.6f}]"
        if sharper is not None:
            line += f", with 8-point density [{sharper.lower:.6f}, ...] (conjectural)"
        print(line)

    print("\nuniform-sphere density (limit 2/9 = 0.22222...):")
    for n in (50, 100, 200, 500, 1000):
        print(f"  N = {n:>4}: F/N^3 = {sphere_angle_density(n):.6f}")


if __name__ == "__main__":
    main()
