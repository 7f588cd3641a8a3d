"""Command-line front end: every bound computation with reproducible output.

Each subcommand prints a JSON report to stdout; sweeps write CSV. When an
output path is given, a run manifest (subcommand, resolved parameters, seed,
version, duration, argv) is written next to it as <out>.manifest.json, and
re-running the recorded argv reproduces the outputs byte for byte.

Exit codes: 0 success with all internal enclosure checks passing, 1 a bound
failed to enclose its oracle value (a genuine bug signal), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .core import OptimizerConfig
from .discrete import (NotSquare, OptimizerConfig as _OC,  # noqa: F401
                       PeriodicPotential, bloch_matrix, coprime_fractions,
                       exact_ground_energy, hofstadter_bottom,
                       is_irreducible_nonnegative, nonsym_bounds,
                       perron_root_power, tighten_bounds)
from .continuum import GridDomain, zeeman_profile, zeeman_upper_bound
from .manybody import (ALPHA_SOURCES, BEST_KNOWN_ANGLE_SUM,
                       identical_coulomb_bounds, maximize_angle_sum,
                       save_configuration)

ENCLOSURE_SLACK = 1e-12


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int
    version: str
    duration_seconds: float
    argv: list


def _emit(report: dict, out_path=None) -> None:
    text = json.dumps(report, indent=2)
    print(text)
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text + "\n")


def _write_manifest(out_path, subcommand: str, parameters: dict, seed: int,
                    started: float, argv: list) -> None:
    manifest = RunManifest(subcommand, parameters, seed, __version__,
                           time.time() - started, list(argv))
    with open(f"{out_path}.manifest.json", "w") as handle:
        json.dump(asdict(manifest), handle, indent=2)
        handle.write("\n")


def load_matrix_file(path, complex_entries: bool = False) -> np.ndarray:
    """First line 'rows cols', then row-major reals (re im pairs if complex)."""
    with open(path) as handle:
        tokens = handle.read().split()
    rows, cols = int(tokens[0]), int(tokens[1])
    data = [float(t) for t in tokens[2:]]
    per_entry = 2 if complex_entries else 1
    if len(data) != rows * cols * per_entry:
        raise ValueError(f"expected {rows * cols * per_entry} entries, found {len(data)}")
    if complex_entries:
        flat = np.array(data).reshape(-1, 2)
        entries = flat[:, 0] + 1j * flat[:, 1]
    else:
        entries = np.array(data)
    return entries.reshape(rows, cols)


def load_vector_file(path) -> np.ndarray:
    with open(path) as handle:
        return np.array([float(line) for line in handle if line.strip()])


def cmd_harper(args, argv) -> int:
    started = time.time()
    potential = PeriodicPotential.harper(args.n, args.m, args.v0)
    config = OptimizerConfig(max_iterations=args.max_iterations,
                             tolerance=args.tolerance, seed=args.seed)
    _, bounds, trace = tighten_bounds(potential, np.ones(args.n), args.eta2, config)
    exact, _ = exact_ground_energy(bloch_matrix(potential, args.eta2))
    report = {"M": args.m, "N": args.n, "V0": args.v0, "eta2": args.eta2,
              "lower": bounds.lower, "upper": bounds.upper, "exact": exact,
              "iterations": len(trace) - 1}
    _emit(report, args.out)
    if args.out:
        _write_manifest(args.out, "harper", report | {"tolerance": args.tolerance},
                        args.seed, started, argv)
    return 0 if bounds.encloses(exact, ENCLOSURE_SLACK) else 1


def cmd_butterfly(args, argv) -> int:
    started = time.time()
    if args.n_max < 3:
        raise ValueError("n-max must be >= 3")
    fractions = coprime_fractions(args.n_max)
    config = OptimizerConfig(max_iterations=args.max_iterations,
                             tolerance=args.tolerance, seed=args.seed)
    rows = hofstadter_bottom(fractions, args.v0, config, jobs=args.jobs)
    violations = sum(0 if lo - ENCLOSURE_SLACK <= ex <= hi + ENCLOSURE_SLACK else 1
                     for _, _, lo, hi, ex in rows)
    with open(args.out, "w") as handle:
        handle.write("M,N,lower,upper,exact\n")
        for m, n, lo, hi, ex in rows:
            handle.write(f"{m},{n},{lo:.17g},{hi:.17g},{ex:.17g}\n")
    _emit({"rows": len(rows), "n_max": args.n_max, "V0": args.v0,
           "violations": violations, "out": args.out})
    _write_manifest(args.out, "butterfly",
                    {"n_max": args.n_max, "V0": args.v0, "tolerance": args.tolerance,
                     "rows": len(rows)}, args.seed, started, argv)
    return 0 if violations == 0 else 1


def cmd_fnmax(args, argv) -> int:
    started = time.time()
    config = OptimizerConfig(max_iterations=args.max_iterations,
                             tolerance=args.tolerance, restarts=args.restarts,
                             seed=args.seed)
    best, configuration = maximize_angle_sum(args.n, args.d, config, jobs=args.jobs)
    reference = BEST_KNOWN_ANGLE_SUM.get(args.n) if args.d == 3 else None
    report = {"N": args.n, "d": args.d, "best_value": best,
              "known_reference": reference,
              "gap_to_reference": None if reference is None else reference - best,
              "restarts": args.restarts, "seed": args.seed}
    _emit(report)
    if args.out:
        save_configuration(args.out, configuration)
        _write_manifest(args.out, "fnmax", report, args.seed, started, argv)
    return 0


def cmd_nbody_bounds(args, argv) -> int:
    started = time.time()
    result = identical_coulomb_bounds(args.n, args.d, args.alpha_source,
                                      custom_sup_f=args.custom_sup_f,
                                      custom_m=args.custom_m)
    report = {"N": result.n, "d": result.d, "lower": result.lower,
              "upper": result.upper, "alpha_source": result.alpha_source,
              "alpha": result.alpha, "conjectural": result.conjectural}
    _emit(report, args.out)
    if args.out:
        _write_manifest(args.out, "nbody-bounds", report, args.seed, started, argv)
    return 0 if result.lower <= result.upper + ENCLOSURE_SLACK else 1


def cmd_zeeman(args, argv) -> int:
    started = time.time()
    if args.b < 0:
        raise ValueError("B must be >= 0")
    grid = GridDomain([(args.rho_min, args.rho_max, args.rho_points),
                       (-args.z_max, args.z_max, args.z_points)])
    analytic, sampled = zeeman_upper_bound(args.b, grid)
    report = {"B": args.b, "analytic": analytic, "sampled": sampled,
              "rho_min": args.rho_min, "rho_max": args.rho_max,
              "rho_points": args.rho_points, "z_max": args.z_max,
              "z_points": args.z_points}
    _emit(report, args.out)
    if args.profile_out:
        profile = zeeman_profile(args.b, grid)
        with open(args.profile_out, "w") as handle:
            handle.write("rho,z,value\n")
            for site, value in zip(profile.sites, profile.values):
                handle.write(f"{site[0]:.17g},{site[1]:.17g},{value:.17g}\n")
    for path in (args.out, args.profile_out):
        if path:
            _write_manifest(path, "zeeman", report, args.seed, started, argv)
    return 0 if sampled <= analytic + ENCLOSURE_SLACK else 1


def cmd_perron(args, argv) -> int:
    started = time.time()
    matrix = load_matrix_file(args.matrix, complex_entries=args.complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquare(f"matrix shape {matrix.shape} is not square")
    phi = load_vector_file(args.phi) if args.phi else np.ones(matrix.shape[0])
    re_lo, re_hi, im_lo, im_hi = nonsym_bounds(matrix, phi)
    report = {"rows": matrix.shape[0], "re_lower": re_lo, "re_upper": re_hi,
              "im_lower": im_lo, "im_upper": im_hi,
              "perron_root": None, "contained": None}
    code = 0
    if is_irreducible_nonnegative(matrix):
        root = perron_root_power(matrix, tol=1e-10)
        contained = (re_lo - 1e-9 <= root <= re_hi + 1e-9
                     and im_lo - 1e-9 <= 0.0 <= im_hi + 1e-9)
        report["perron_root"] = root
        report["contained"] = contained
        code = 0 if contained else 1
    _emit(report, args.out)
    if args.out:
        _write_manifest(args.out, "perron", report, args.seed, started, argv)
    return code


def _add_common(parser, out_default=None):
    parser.add_argument("--out", default=out_default, help="write the report/output here")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localbound",
        description="Eigenvalue enclosures from local energies of positive test functions")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("harper", help="bottom-of-spectrum enclosure at rational flux M/N")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--eta2", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--max-iterations", type=int, default=20000)
    _add_common(p)
    p.set_defaults(func=cmd_harper)

    p = sub.add_parser("butterfly", help="CSV sweep over all coprime fluxes up to n-max")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--max-iterations", type=int, default=20000)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_butterfly)

    p = sub.add_parser("fnmax", help="maximize the vertex-angle cosine sum of N points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=3000)
    _add_common(p)
    p.set_defaults(func=cmd_fnmax)

    p = sub.add_parser("nbody-bounds",
                       help="ground-energy enclosure for identical Coulomb particles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--alpha-source", choices=list(ALPHA_SOURCES), default="lemma3")
    p.add_argument("--custom-sup-f", type=float, default=None)
    p.add_argument("--custom-m", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_nbody_bounds)

    p = sub.add_parser("zeeman", help="magnetized-hydrogen upper bound, analytic and sampled")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=6.0)
    p.add_argument("--rho-points", type=int, default=121)
    p.add_argument("--z-max", type=float, default=6.0)
    p.add_argument("--z-points", type=int, default=121)
    p.add_argument("--profile-out", default=None, help="write the sampled profile CSV here")
    _add_common(p)
    p.set_defaults(func=cmd_zeeman)

    p = sub.add_parser("perron", help="componentwise eigenvalue bounds for a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--phi", default=None, help="positive test vector file (default: all ones)")
    p.add_argument("--complex", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_perron)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (ValueError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
