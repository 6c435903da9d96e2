"""Main entry point for the AF MIMO capacity toolkit."""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from app.analysis.capacity import (
    alpha_sweep,
    high_snr_char,
    lower_bound,
    lower_bound_highsnr,
    offset_shift,
    offset_shift_limit,
    sweep_rho,
    upper_bound,
    upper_bound_highsnr,
)
from app.analysis.eigenstats import pdf_eval, unordered_pdf
from app.core.config import settings
from app.core.errors import DomainError, NumericalError
from app.schemas.montecarlo import RngStream
from app.schemas.run import OutputFormat, ReferenceCheck, RunSpec, Subcommand
from app.schemas.system import SystemConfig
from app.simulation.mcoracle import mc_capacity, mc_cascade_eigenvalues
from app.utils.grids import db_to_linear, parse_range
from app.utils.report import load_reference_tables, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

Rows = List[Dict[str, Any]]

# Upper quantile of the Monte Carlo samples covered by the pdf histogram.
_PDF_HISTOGRAM_QUANTILE = 0.995


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ns", type=int, default=2, help="Number of source antennas")
    common.add_argument("--nr", type=int, default=3, help="Number of relay antennas")
    common.add_argument("--nd", type=int, default=4, help="Number of destination antennas")
    gain = common.add_mutually_exclusive_group()
    gain.add_argument("--alpha", type=float, help="Fixed relay power gain")
    gain.add_argument(
        "--alpha-over-rho", type=float, help="Couple the relay gain to the SNR, alpha = beta * rho"
    )
    common.add_argument(
        "--rho-db", type=str, default="", help="SNR grid in dB, start:step:stop or a comma list"
    )
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Random seed")
    common.add_argument(
        "--trials", type=int, default=settings.DEFAULT_TRIALS, help="Monte Carlo trials"
    )
    common.add_argument(
        "--format", type=str, default="csv", choices=["csv", "json"], help="Output encoding"
    )
    common.add_argument("--output", type=str, default=None, help="Output file (stdout when omitted)")
    common.add_argument(
        "--log-level",
        type=str,
        default=settings.LOG_LEVEL.lower(),
        choices=["debug", "info", "warning", "error", "critical"],
        help="Logging level",
    )

    parser = argparse.ArgumentParser(description=settings.DESCRIPTION)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    subparsers.add_parser(
        "capacity", parents=[common], help="Exact capacity, bounds and affine approximation"
    )
    subparsers.add_parser("bounds", parents=[common], help="Upper and lower bounds")
    subparsers.add_parser("highsnr", parents=[common], help="High-SNR slope and power offset")
    subparsers.add_parser("mc", parents=[common], help="Monte Carlo ergodic capacity")
    sweep = subparsers.add_parser("sweep", parents=[common], help="Relay-gain sweep at fixed SNR")
    sweep.add_argument(
        "--alpha-grid", type=str, required=True, help="log10(alpha) grid, start:step:stop"
    )
    pdf = subparsers.add_parser(
        "pdf", parents=[common], help="Analytic eigenvalue density against a histogram"
    )
    pdf.add_argument("--bins", type=int, default=50, help="Histogram bins")
    tables = subparsers.add_parser(
        "tables", parents=[common], help="Reproduce published high-SNR offsets"
    )
    tables.add_argument(
        "--which", type=str, default="all", choices=["I", "II", "example", "all"],
        help="Reference table",
    )
    return parser.parse_args(argv)


def build_run_spec(args: argparse.Namespace) -> RunSpec:
    """Convert parsed arguments into a validated RunSpec."""
    alpha_grid = []
    if getattr(args, "alpha_grid", None):
        alpha_grid = [float(10.0 ** e) for e in parse_range(args.alpha_grid)]
    return RunSpec(
        subcommand=Subcommand(args.subcommand),
        n_s=args.ns,
        n_r=args.nr,
        n_d=args.nd,
        alpha=args.alpha,
        alpha_over_rho=args.alpha_over_rho,
        rho_db=parse_range(args.rho_db) if args.rho_db.strip() else [],
        alpha_grid=alpha_grid,
        seed=args.seed,
        trials=args.trials,
        bins=getattr(args, "bins", 50),
        which=getattr(args, "which", "all"),
        output=args.output,
        format=OutputFormat(args.format),
    )


def _config(spec: RunSpec, rho_db: Optional[float]) -> SystemConfig:
    rho = db_to_linear(rho_db) if rho_db is not None else 0.0
    if spec.alpha_over_rho is not None:
        return SystemConfig.from_alpha_over_rho(spec.n_s, spec.n_r, spec.n_d, spec.alpha_over_rho, rho)
    return SystemConfig(n_s=spec.n_s, n_r=spec.n_r, n_d=spec.n_d, alpha=spec.alpha, rho=rho)


def _run_capacity(spec: RunSpec) -> Tuple[List[str], Rows]:
    rhos = [db_to_linear(x) for x in spec.rho_db]
    points = sweep_rho(
        spec.n_s, spec.n_r, spec.n_d, rhos, alpha=spec.alpha, beta=spec.alpha_over_rho
    )
    rows = [
        {
            "rho_db": rho_db,
            "exact": point.exact,
            "upper": point.upper,
            "lower": point.lower,
            "affine": point.affine,
        }
        for rho_db, point in zip(spec.rho_db, points)
    ]
    return ["rho_db", "exact", "upper", "lower", "affine"], rows


def _run_bounds(spec: RunSpec) -> Tuple[List[str], Rows]:
    rows = []
    for rho_db in spec.rho_db:
        cfg = _config(spec, rho_db)
        rows.append({
            "rho_db": rho_db,
            "upper": upper_bound(cfg).value,
            "lower": lower_bound(cfg).value,
            "upper_highsnr": upper_bound_highsnr(cfg).value,
            "lower_highsnr": lower_bound_highsnr(cfg).value,
        })
    return ["rho_db", "upper", "lower", "upper_highsnr", "lower_highsnr"], rows


def _run_highsnr(spec: RunSpec) -> Tuple[List[str], Rows]:
    char = high_snr_char(spec.n_s, spec.n_r, spec.n_d, spec.alpha_over_rho)
    row = {
        "n_s": spec.n_s,
        "n_r": spec.n_r,
        "n_d": spec.n_d,
        "beta": char.beta,
        "slope": char.slope,
        "offset_3db": char.offset_3db,
        "offset_db": char.offset_db,
    }
    return ["n_s", "n_r", "n_d", "beta", "slope", "offset_3db", "offset_db"], [row]


def _run_mc(spec: RunSpec) -> Tuple[List[str], Rows]:
    rows = []
    for idx, rho_db in enumerate(spec.rho_db):
        cfg = _config(spec, rho_db)
        estimate = mc_capacity(cfg, spec.trials, RngStream(seed=spec.seed, stream_id=idx))
        rows.append({
            "rho_db": rho_db,
            "mean": estimate.mean,
            "stderr": estimate.stderr,
            "trials": estimate.n_trials,
            "seed": spec.seed,
        })
    return ["rho_db", "mean", "stderr", "trials", "seed"], rows


def _run_sweep(spec: RunSpec) -> Tuple[List[str], Rows]:
    rho = db_to_linear(spec.rho_db[0])
    points = alpha_sweep(spec.n_s, spec.n_r, spec.n_d, rho, spec.alpha_grid)
    rows = [
        {"alpha": p.alpha, "exact": p.exact, "upper": p.upper, "lower": p.lower}
        for p in points
    ]
    return ["alpha", "exact", "upper", "lower"], rows


def _run_pdf(spec: RunSpec) -> Tuple[List[str], Rows]:
    cfg = _config(spec, spec.rho_db[0] if spec.rho_db else None)
    series = unordered_pdf(cfg)
    samples = mc_cascade_eigenvalues(cfg, spec.trials, RngStream(seed=spec.seed))
    top = float(np.quantile(samples, _PDF_HISTOGRAM_QUANTILE))
    counts, edges = np.histogram(samples, bins=spec.bins, range=(0.0, top))
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = counts / (samples.size * widths)
    analytic = pdf_eval(series, centers)
    rows = [
        {"lambda": float(c), "analytic_pdf": float(f), "mc_density": float(d)}
        for c, f, d in zip(centers, analytic, density)
    ]
    return ["lambda", "analytic_pdf", "mc_density"], rows


def _reference_value(row) -> float:
    if row.kind == "offset":
        return high_snr_char(row.n_s, row.n_r, row.n_d, row.beta).offset_db
    if row.k is None:
        return offset_shift_limit(row.beta, row.n_d)
    return offset_shift(row.n_d, row.k, row.beta)


def _run_tables(spec: RunSpec) -> Tuple[List[str], Rows]:
    tables = load_reference_tables(settings.REFERENCE_TABLES_PATH)
    names = list(tables) if spec.which == "all" else [spec.which]
    rows = []
    for name in names:
        if name not in tables:
            raise DomainError(f"Reference table '{name}' not found")
        for ref in tables[name]:
            check = ReferenceCheck(table=name, row=ref, computed_db=_reference_value(ref))
            if not check.passed:
                logger.warning(
                    f"Table {name} ({ref.n_s},{ref.n_r},{ref.n_d}): computed "
                    f"{check.computed_db:.4f} dB vs published {ref.reference_db} dB"
                )
            rows.append({
                "table": name,
                "kind": ref.kind,
                "n_s": ref.n_s,
                "n_r": ref.n_r,
                "n_d": ref.n_d,
                "beta": ref.beta,
                "k": ref.k,
                "computed_db": check.computed_db,
                "reference_db": ref.reference_db,
                "delta_db": check.delta_db,
                "passed": check.passed,
            })
    columns = [
        "table", "kind", "n_s", "n_r", "n_d", "beta", "k",
        "computed_db", "reference_db", "delta_db", "passed",
    ]
    return columns, rows


HANDLERS: Dict[Subcommand, Callable[[RunSpec], Tuple[List[str], Rows]]] = {
    Subcommand.CAPACITY: _run_capacity,
    Subcommand.BOUNDS: _run_bounds,
    Subcommand.HIGHSNR: _run_highsnr,
    Subcommand.MC: _run_mc,
    Subcommand.SWEEP: _run_sweep,
    Subcommand.PDF: _run_pdf,
    Subcommand.TABLES: _run_tables,
}


def _metadata(spec: RunSpec) -> Dict[str, Any]:
    return {
        "version": settings.VERSION,
        "subcommand": spec.subcommand.value,
        "seed": spec.seed,
        "trials": spec.trials,
        "config": {
            "n_s": spec.n_s,
            "n_r": spec.n_r,
            "n_d": spec.n_d,
            "alpha": spec.alpha,
            "alpha_over_rho": spec.alpha_over_rho,
        },
    }


def run(spec: RunSpec) -> int:
    """Execute a validated run and write its output.

    Returns:
        0 on success, 2 on validation errors, 3 on numerical failures.
    """
    logger.info(f"Running {spec.subcommand.value} for ({spec.n_s},{spec.n_r},{spec.n_d})")
    try:
        columns, rows = HANDLERS[spec.subcommand](spec)
        write_report(columns, rows, spec.format, _metadata(spec), spec.output)
    except (NumericalError, ArithmeticError) as e:
        logger.error(f"Numerical failure: {type(e).__name__}: {str(e)}")
        return EXIT_NUMERICAL
    except (DomainError, ValidationError) as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"Cannot write output: {str(e)}")
        return EXIT_VALIDATION
    except Exception as e:
        logger.error(f"Unexpected failure: {str(e)}", exc_info=True)
        return EXIT_FAILURE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the application."""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad flags and 0 for --help
        return e.code if isinstance(e.code, int) else EXIT_OK

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        spec = build_run_spec(args)
    except (DomainError, ValidationError) as e:
        logger.error(f"Invalid arguments: {str(e)}")
        return EXIT_VALIDATION
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
