"""nearfar-cdma: bounds, sweeps, Tanaka fixed points, spectra and the Monte-Carlo oracle.

Examples:
  nearfar-cdma bounds --beta 2 --ebn0-db 20 --pcf-db 20
  nearfar-cdma sweep --axis ebn0_db --start 0 --stop 20 --points 21 --beta 2 --pcf-db 20 --out fig.csv
  nearfar-cdma tanaka --beta 4 --ebn0-db 20
  nearfar-cdma spectrum --m 256 --n 512 --trials 10
  nearfar-cdma oracle --m 6 --n 12 --ebn0-db 8 --pcf-db 20 --samples 100000 --seed 1
  nearfar-cdma figures --fig 3 --out artifacts/fig3

Exit status: 0 success, 1 usage error, 2 computation failure, 3 partial output.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any, NoReturn

from nearfar_cdma.bounds.capacity import BOUND_FIELDS, capacity_bounds
from nearfar_cdma.bounds.noise import omega_squared
from nearfar_cdma.config import SELECTION_RULES, RunConfig, default_seed, load_config
from nearfar_cdma.core.params import SystemParams, ebn0_db_to_sigma, pcf_db_to_rho
from nearfar_cdma.core.rng import MAX_SEED
from nearfar_cdma.errors import BracketFailureError, DomainError, NearFarError
from nearfar_cdma.invariants.audit import (
    audit_bound_set,
    audit_mi_estimate,
    audit_spectral_report,
    audit_tanaka_bound,
)
from nearfar_cdma.oracle.mutual_info import sandwich_verdict, sum_capacity_estimate
from nearfar_cdma.spectral.report import pool_reports, spectrum_report
from nearfar_cdma.spectral.signature import sample_signature, sylvester_signature
from nearfar_cdma.sweep.figures import FIGURES, write_figure
from nearfar_cdma.sweep.runner import AXES, SweepSpec, format_cell, run_sweep, sweep_csv_text, write_sweep_csv
from nearfar_cdma.tanaka.fixed_point import tanaka_bound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_PARTIAL = 3

BOUNDS_CSV_HEADER = (
    "beta", "sigma", "rho", "lower_raw", "lower", "upper_conj",
    "upper_tanaka_raw", "upper_tanaka", "exact", "theta2", "omega2",
)


class UsageError(Exception):
    """Flags parsed but describe an invalid request."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _add_noise_flags(p: argparse.ArgumentParser, *, rho_required: bool) -> None:
    noise = p.add_mutually_exclusive_group(required=True)
    noise.add_argument("--sigma", type=float, help="Per-chip noise standard deviation")
    noise.add_argument("--ebn0-db", type=float, help="E_b/N_0 in dB (sigma = sqrt(10^(-x/10) / 2))")
    nearfar = p.add_mutually_exclusive_group(required=rho_required)
    nearfar.add_argument("--rho", type=float, help="Near-far amplitude standard deviation")
    nearfar.add_argument("--pcf-db", type=float, help="Power control factor in dB (rho = 10^(-x/20))")


def _resolve(args: argparse.Namespace, beta: float) -> SystemParams:
    sigma = args.sigma if args.sigma is not None else ebn0_db_to_sigma(args.ebn0_db)
    if args.rho is not None:
        rho = args.rho
    elif args.pcf_db is not None:
        rho = pcf_db_to_rho(args.pcf_db)
    else:
        rho = 0.0
    try:
        return SystemParams(beta=beta, sigma=sigma, rho=rho)
    except DomainError as e:
        raise UsageError(str(e)) from e


def _params_dict(p: SystemParams) -> dict[str, float]:
    return {"beta": p.beta, "sigma": p.sigma, "rho": p.rho}


def _seeds(args: argparse.Namespace, count: int = 1) -> int:
    """First of `count` consecutive seeds, from --seed or the environment."""
    try:
        first = default_seed() if args.seed is None else args.seed
    except DomainError as e:
        raise UsageError(str(e)) from e
    if first < 0 or first + count - 1 > MAX_SEED:
        raise UsageError(f"seeds {first}..{first + count - 1} fall outside [0, 2**64 - 1]")
    return first


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nearfar-cdma",
        description="Sum-capacity bounds for binary CDMA with near-far power fluctuation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n", 1)[1],
    )
    parser.add_argument("--config", help="JSON file with optimizer/tanaka/oracle sections")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable INFO-level logging")
    parser.add_argument("--debug", action="store_true", help="Enable DEBUG-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="Lower, conjectured and Tanaka bounds at one point")
    p.add_argument("--beta", type=float, required=True, help="Load ratio n/m")
    _add_noise_flags(p, rho_required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="Sweep one parameter and write a CSV")
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--beta", type=float)
    for flag in ("--sigma", "--ebn0-db", "--rho", "--pcf-db"):
        p.add_argument(flag, type=float)
    p.add_argument(
        "--outputs",
        default=",".join(BOUND_FIELDS),
        help=f"Comma-separated subset of {','.join(BOUND_FIELDS)}",
    )
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="Worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tanaka", help="Replica fixed points and the Tanaka bound")
    p.add_argument("--beta", type=float, required=True)
    _add_noise_flags(p, rho_required=False)
    p.add_argument("--selection", choices=SELECTION_RULES, help="Fixed-point selection rule")
    p.add_argument("--grid", type=int, help="Bracketing grid size")
    p.set_defaults(func=cmd_tanaka)

    p = sub.add_parser("spectrum", help="Gram spectra of random signatures vs Marčenko–Pastur")
    p.add_argument("--m", type=int, required=True, help="Chips per symbol")
    p.add_argument("--n", type=int, required=True, help="Users")
    p.add_argument("--seed", type=int, help="First trial seed (default: $NEARFAR_DEFAULT_SEED or 0)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--eigenvalues", action="store_true", help="Include every eigenvalue in the report")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("oracle", help="Monte-Carlo mutual information at small (m, n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_noise_flags(p, rho_required=False)
    p.add_argument("--samples", type=int, help="Monte-Carlo samples (default from config)")
    p.add_argument("--seed", type=int, help="Seed for signatures and samples (default: $NEARFAR_DEFAULT_SEED or 0)")
    p.add_argument("--orthogonal", action="store_true", help="Use Sylvester-Hadamard rows instead of random signatures")
    p.add_argument("--slack", type=float, default=0.15, help="Finite-size slack of the sandwich verdict")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("figures", help="Write the CSV bundle of one figure")
    p.add_argument("--fig", type=int, choices=FIGURES, required=True)
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_figures)
    return parser


def cmd_bounds(args: argparse.Namespace, config: RunConfig) -> int:
    p = _resolve(args, args.beta)
    bs = capacity_bounds(p, config.optimizer, config.tanaka)
    audit_bound_set(bs)
    if args.format == "json":
        sys.stdout.write(_dump_json(bs.to_dict()))
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BOUNDS_CSV_HEADER)
    writer.writerow(
        format_cell(v)
        for v in (
            bs.beta, bs.sigma, bs.rho, bs.lower_raw, bs.lower, bs.upper_conjectured,
            bs.upper_tanaka_raw, bs.upper_tanaka, bs.exact, bs.theta2, bs.omega2,
        )
    )
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    flags = {"beta": args.beta, "sigma": args.sigma, "ebn0_db": args.ebn0_db, "rho": args.rho, "pcf_db": args.pcf_db}
    fixed = {k: v for k, v in flags.items() if v is not None}
    outputs = tuple(s.strip() for s in args.outputs.split(",") if s.strip())
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        spec = SweepSpec(args.axis, args.start, args.stop, args.points, fixed=fixed, outputs=outputs)
    except DomainError as e:
        raise UsageError(str(e)) from e
    result = run_sweep(spec, jobs=args.jobs, config=config)
    if args.out:
        write_sweep_csv(result, args.out)
    else:
        sys.stdout.write(sweep_csv_text(result))
    if result.partial:
        logger.warning("%d of %d sweep points failed; their cells are empty", result.failures, len(result.rows))
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_tanaka(args: argparse.Namespace, config: RunConfig) -> int:
    p = _resolve(args, args.beta)
    cfg = config.tanaka
    if args.selection is not None:
        cfg = dataclasses.replace(cfg, selection=args.selection)
    if args.grid is not None:
        try:
            cfg = dataclasses.replace(cfg, grid=args.grid)
        except DomainError as e:
            raise UsageError(str(e)) from e
    # A near-far spread is absorbed into the best-case noise ω²; rho = 0 gives σ².
    noise_variance = omega_squared(p) if p.rho > 0.0 else p.noise_variance
    bound = tanaka_bound(p.beta, noise_variance, cfg)
    audit_tanaka_bound(bound, cfg.residual_tol)
    payload = {**_params_dict(p), **bound.to_dict()}
    sys.stdout.write(_dump_json(payload))
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace, config: RunConfig) -> int:
    if args.m < 2 or args.n < 2:
        raise UsageError("--m and --n must be >= 2")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    first = _seeds(args, args.trials)
    reports, failures = [], []
    for seed in range(first, first + args.trials):
        try:
            report = spectrum_report(sample_signature(args.m, args.n, seed))
            audit_spectral_report(report)
        except (NearFarError, AssertionError) as e:
            logger.warning("trial seed=%d failed: %s", seed, e)
            failures.append({"seed": seed, "error": f"{type(e).__name__}: {e}"})
            continue
        reports.append(report)
    if not reports:
        sys.stdout.write(_dump_json({"m": args.m, "n": args.n, "failures": failures}))
        return EXIT_FAILURE
    pooled = pool_reports(reports)
    payload = pooled.to_dict()
    if args.eigenvalues:
        payload["trials"] = [t.to_dict(include_eigenvalues=True) for t in pooled.trials]
    payload["failures"] = failures
    sys.stdout.write(_dump_json(payload))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    if args.m < 1 or args.n < 1:
        raise UsageError("--m and --n must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    p = _resolve(args, args.n / args.m)
    seed = _seeds(args)
    samples = config.oracle.samples if args.samples is None else args.samples
    if args.orthogonal:
        try:
            A = sylvester_signature(args.m, args.n)
        except DomainError as e:
            raise UsageError(f"--orthogonal: {e}") from e
    else:
        A = sample_signature(args.m, args.n, seed)
    estimate = sum_capacity_estimate(A, p.sigma, p.rho, samples, seed, config.oracle, jobs=args.jobs)
    audit_mi_estimate(estimate)
    bs = capacity_bounds(p, config.optimizer, config.tanaka)
    audit_bound_set(bs)
    upper = bs.exact if bs.exact is not None else bs.upper_conjectured
    payload = {
        "m": args.m,
        "n": args.n,
        **_params_dict(p),
        "orthogonal": bool(args.orthogonal),
        "estimate": estimate.to_dict(),
        "bounds": bs.to_dict(),
        "reference_upper": upper,
        "verdict": sandwich_verdict(estimate, upper, args.slack),
    }
    sys.stdout.write(_dump_json(payload))
    return EXIT_OK


def cmd_figures(args: argparse.Namespace, config: RunConfig) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    manifest, results = write_figure(args.fig, args.out, jobs=args.jobs, config=config)
    sys.stdout.write(f"{manifest}\n")
    if any(r.partial for r in results):
        logger.warning("figure %d has failed points; see the empty CSV cells", args.fig)
        return EXIT_PARTIAL
    return EXIT_OK


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s: %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        config = load_config(args.config)
    except (DomainError, OSError) as e:
        sys.stderr.write(f"nearfar-cdma: error: {e}\n")
        return EXIT_USAGE
    try:
        return args.func(args, config)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"nearfar-cdma: error: {e}\n")
        return EXIT_USAGE
    except BracketFailureError as e:
        sys.stderr.write(f"nearfar-cdma: {e}; retry with --grid {e.suggested_grid}\n")
        return EXIT_FAILURE
    except (NearFarError, AssertionError, OSError) as e:
        sys.stderr.write(f"nearfar-cdma: {type(e).__name__}: {e}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
