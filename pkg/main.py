#!/usr/bin/env python3
"""
Moment Bounds - Main Entry Point
Upper and lower bounds on the measure of a union of semi-algebraic sets.
Supports CLI (solve / check) and API (FastAPI) modes
"""

import argparse
import logging
import platform
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

# Load environment variables
load_dotenv()

from config import (
    MAX_DEGREE,
    RelaxationOptions,
    RunConfig,
    SolverSettings,
    default_workers,
    parse_degree_range,
)
from geometry import (
    PieceCountError,
    ProblemFormatError,
    ProblemSpec,
    complement_union,
    load_problem,
    normalize,
    problem_hash,
)
from hierarchy import BoundsReport, SweepError, sweep
from hierarchy.bounds import relaxation
from hierarchy.report import LOWER_SIDES, UPPER_SIDES
from montecarlo import McEstimate, estimate
from relaxation import DegreeTooSmallError
from solvers import export_sdpa

logger = logging.getLogger("moment_bounds")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_VIOLATION = 3

SANDWICH_SIGMAS = 3.0
SANDWICH_SLACK = 1e-6


def package_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version()}
    for module_name in ("numpy", "scipy", "cvxpy", "pydantic"):
        try:
            module = __import__(module_name)
            versions[module_name] = getattr(module, "__version__", "unknown")
        except ImportError:
            versions[module_name] = "missing"
    return versions


def export_path(base: Path, d: int, single: bool) -> Path:
    """out.dat-s stays as given for one degree; otherwise out.d5.dat-s, out.d6.dat-s, ..."""
    if single:
        return base
    return base.with_name(f"{base.stem}.d{d}{base.suffix}")


class MomentBoundsApp:
    """Main orchestrator: problem -> relaxation sweep -> report"""

    def __init__(
        self,
        settings: Optional[SolverSettings] = None,
        options: Optional[RelaxationOptions] = None,
        workers: int = 1,
        backend: str = "cvxpy",
    ):
        """
        Initialize the orchestrator

        Args:
            settings: Solver settings (defaults plus environment overrides)
            options: Relaxation assembly options
            workers: Pool size for independent (d, side) jobs
            backend: Solver backend name
        """
        self.settings = settings or SolverSettings.from_env()
        self.options = options or RelaxationOptions()
        self.workers = workers
        self.backend = backend

    def run(
        self,
        spec: ProblemSpec,
        d_min: int,
        d_max: int,
        stokes_modes: Sequence[bool] = (True,),
        sides: Sequence[str] = ("upper", "lower"),
        bonferroni_depth: Optional[int] = None,
        moment_order: Optional[int] = 2,
        verbose: bool = False,
    ) -> BoundsReport:
        """Run the sweep and optionally print the stage banners"""
        if verbose:
            print("\n" + "=" * 60)
            print(f"📐 PROBLEM {spec.name}")
            print("=" * 60)
            print(f"Dimension {spec.n}, measure {spec.measure.kind}, {spec.union.p} piece(s)")
            print(f"Degrees {d_min}..{d_max}, sides {', '.join(sides)}, Stokes {list(stokes_modes)}\n")

        report = sweep(
            spec,
            d_min,
            d_max,
            use_stokes=tuple(stokes_modes),
            sides=tuple(sides),
            settings=self.settings,
            options=self.options,
            workers=self.workers,
            bonferroni_depth=bonferroni_depth,
            moment_order=moment_order,
            backend=self.backend,
        )

        if verbose:
            print_report(report)
        return report

    def export(self, spec: ProblemSpec, d_min: int, d_max: int, base: Path, use_stokes: bool, side: str) -> List[Path]:
        """Write one SDPA file per degree of the upper (or complement) relaxation"""
        spec = normalize(spec)
        target = complement_union(spec, self.options.complement_cap) if side == "lower" else spec
        written = []
        for d in range(d_min, d_max + 1):
            problem = relaxation(target, d, use_stokes, self.options)
            path = export_sdpa(problem, export_path(base, d, d_min == d_max))
            logger.info("Exported d=%d (%s, stokes=%s) to %s", d, side, use_stokes, path)
            written.append(path)
        return written


def _fmt(value: Optional[float], spec: str = ".6f") -> str:
    return "-" if value is None else format(value, spec)


def print_report(report: BoundsReport) -> None:
    print("\n" + "=" * 60)
    print("📋 BOUNDS")
    print("=" * 60)
    print(f"{'':2} {'d':>3} {'side':<17} {'stokes':<6} {'value':>12} {'gap':>9}  status")
    for row in report.sorted_rows():
        glyph = "✅" if row.ok else "❌"
        gap = _fmt(row.gap_eps, ".2%")
        print(
            f"{glyph} {row.d:>3} {row.side:<17} {str(row.stokes).lower():<6} "
            f"{_fmt(row.value):>12} {gap:>9}  {row.status}"
        )
    for moment in report.moments:
        print(f"   moment {moment.alpha} at d={moment.d} (stokes={str(moment.stokes).lower()}): {moment.value:.6f}")
    for issue in report.issues:
        print(f"⚠️  {issue}")


def print_estimate(mc: McEstimate) -> None:
    print("\n" + "=" * 60)
    print("🎲 MONTE CARLO")
    print("=" * 60)
    print(f"N={mc.samples} seed={mc.seed} shards={mc.shards} hits={mc.hits}")
    print(
        f"estimate {mc.estimate:.6f}  SE {mc.std_error:.2e}  "
        f"{mc.confidence:.0%} CI [{mc.ci_low:.6f}, {mc.ci_high:.6f}]"
    )


def sandwich_violations(report: BoundsReport, mc: McEstimate, sigmas: float = SANDWICH_SIGMAS) -> List[str]:
    """
    Compare every successful bound row with a Monte Carlo estimate

    Upper rows must satisfy mu_hat - sigmas*SE <= value, lower rows
    value <= mu_hat + sigmas*SE, and lower <= upper at each (d, stokes).
    """
    violations = []
    band = sigmas * mc.std_error
    for row in report.sorted_rows():
        if not row.ok:
            continue
        slack = SANDWICH_SLACK * (1.0 + abs(row.value))
        if row.side in UPPER_SIDES and mc.estimate - band > row.value + slack:
            violations.append(f"{row.side} d={row.d} stokes={row.stokes}: {row.value:.6f} < MC {mc.estimate:.6f} - {band:.2e}")
        if row.side in LOWER_SIDES and row.value > mc.estimate + band + slack:
            violations.append(f"{row.side} d={row.d} stokes={row.stokes}: {row.value:.6f} > MC {mc.estimate:.6f} + {band:.2e}")
    for upper_side, lower_side in zip(UPPER_SIDES, LOWER_SIDES):
        for upper in (row for row in report.rows if row.side == upper_side and row.ok):
            lower = report.row(upper.d, lower_side, upper.stokes)
            if lower is not None and lower.ok and lower.value > upper.value + SANDWICH_SLACK * (1.0 + abs(upper.value)):
                violations.append(
                    f"d={upper.d} stokes={upper.stokes}: {lower_side} {lower.value:.6f} > {upper_side} {upper.value:.6f}"
                )
    return violations


# ============================================
# Commands
# ============================================

def cmd_solve(config: RunConfig, verbose: bool = False) -> int:
    """Solve the hierarchy for one problem file; returns the process exit code"""
    try:
        spec = load_problem(config.problem)
        digest = problem_hash(config.problem)
    except (ProblemFormatError, ValueError) as e:
        print(f"❌ Error: {e}")
        return EXIT_USAGE

    versions = package_versions()
    logger.info("Problem %s sha256=%s", config.problem, digest)
    logger.info("Degrees %d..%d, sides %s, stokes modes %s", config.d_min, config.d_max, config.sides, config.stokes_modes)
    logger.info("Solver settings %s; relaxation %s", config.solver.model_dump(), config.relaxation.model_dump())
    logger.info("Versions %s", versions)

    app = MomentBoundsApp(config.solver, config.relaxation, config.workers)

    if config.export_sdpa is not None:
        side = "lower" if config.sides == "lower" else "upper"
        try:
            written = app.export(spec, config.d_min, config.d_max, config.export_sdpa, config.stokes_modes[-1], side)
        except (DegreeTooSmallError, PieceCountError, ValueError) as e:
            print(f"❌ Error: {e}")
            return EXIT_USAGE
        for path in written:
            print(f"💾 SDPA written to {path}")
        if config.no_solve:
            return EXIT_OK

    try:
        report = app.run(
            spec,
            config.d_min,
            config.d_max,
            stokes_modes=config.stokes_modes,
            sides=config.side_list,
            bonferroni_depth=config.bonferroni_depth,
            moment_order=config.moment_order,
            verbose=verbose,
        )
    except (SweepError, ProblemFormatError, PieceCountError) as e:
        print(f"❌ Error: {e}")
        return EXIT_USAGE

    report.problem_hash = digest
    report.versions = versions

    if config.mc_samples is not None:
        mc = estimate(spec, config.mc_samples, seed=config.seed, shards=config.shards)
        report.settings["monte_carlo"] = mc.to_dict()
        report.issues.extend(sandwich_violations(report, mc))
        print_estimate(mc)

    if config.csv_path is not None:
        report.write_csv(config.csv_path)
        print(f"💾 CSV written to {config.csv_path}")
    if config.json_path is not None:
        report.write_json(config.json_path)
        print(f"💾 JSON written to {config.json_path}")

    if not verbose:
        print_report(report)

    if not report.all_ok:
        failed = sum(1 for row in report.rows if not row.ok)
        print(f"\n❌ {failed} relaxation(s) did not solve")
        return EXIT_SOLVER
    return EXIT_OK


def cmd_check(
    problem: Path,
    report_path: Optional[Path],
    samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 1,
) -> int:
    """Validate an existing report against a fresh Monte Carlo estimate"""
    if report_path is None or not Path(report_path).is_file():
        print(f"❌ Error: report file not found: {report_path}")
        return EXIT_USAGE
    try:
        spec = load_problem(problem)
        report = BoundsReport.read(report_path)
        mc = estimate(spec, samples, seed=seed, shards=shards)
    except (ProblemFormatError, ValidationError, ValueError) as e:
        print(f"❌ Error: {e}")
        return EXIT_USAGE

    print_estimate(mc)
    violations = sandwich_violations(report, mc)
    if violations:
        print("\n❌ Sandwich violated:")
        for violation in violations:
            print(f"   {violation}")
        return EXIT_VIOLATION
    checked = sum(1 for row in report.rows if row.ok)
    print(f"\n✅ {checked} bound(s) consistent with the Monte Carlo estimate")
    return EXIT_OK


# ============================================
# FastAPI Application
# ============================================

def create_api_app():
    """Create FastAPI application"""
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware
    from pydantic import BaseModel, Field

    from geometry import ProblemDocument, document_to_spec
    from measures import available_measures
    from relaxation import available_bases

    app = FastAPI(
        title="Moment Bounds",
        description="Moment-SOS bounds on the measure of a union of semi-algebraic sets",
        version="1.0.0",
    )

    # Enable CORS
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    class BoundsRequest(BaseModel):
        problem: ProblemDocument
        d_min: int = Field(default=2, ge=1, le=MAX_DEGREE)
        d_max: int = Field(default=4, ge=1, le=MAX_DEGREE)
        stokes: bool = True
        compare_stokes: bool = False
        sides: str = "both"
        bonferroni_depth: Optional[int] = Field(default=None, ge=1)
        moment_order: int = Field(default=2, ge=0)
        basis: str = "monomial"

    @app.get("/health")
    def health():
        return {"status": "healthy"}

    @app.get("/measures")
    def list_measures():
        return {"measures": available_measures()}

    @app.get("/bases")
    def list_bases():
        return {"bases": available_bases()}

    @app.post("/bounds")
    def compute_bounds(request: BoundsRequest):
        if request.d_min > request.d_max:
            raise HTTPException(status_code=400, detail=f"degree range is empty: {request.d_min}..{request.d_max}")
        if request.sides not in ("upper", "lower", "both"):
            raise HTTPException(status_code=400, detail=f"unknown sides {request.sides!r}")
        try:
            spec = document_to_spec(request.problem)
            options = RelaxationOptions(basis=request.basis)
            runner = MomentBoundsApp(options=options, workers=default_workers())
            report = runner.run(
                spec,
                request.d_min,
                request.d_max,
                stokes_modes=(False, True) if request.compare_stokes else (request.stokes,),
                sides=("upper", "lower") if request.sides == "both" else (request.sides,),
                bonferroni_depth=request.bonferroni_depth,
                moment_order=min(request.moment_order, 2 * request.d_min),
            )
        except (ProblemFormatError, SweepError, PieceCountError, ValidationError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            raise HTTPException(status_code=500, detail=str(e))
        report.versions = package_versions()
        return report.model_dump(mode="json")

    return app


# ============================================
# CLI Interface
# ============================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Show stage banners and INFO logs")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: WARNING)",
    )

    parser = argparse.ArgumentParser(
        description="Moment Bounds - upper and lower bounds on the measure of a union of semi-algebraic sets",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", parents=[common], help="Run the relaxation hierarchy")
    solve.add_argument("problem", type=Path, help="Problem file (*.prob)")
    solve.add_argument("--d", default="2..6", help="Degree range 'lo..hi' or a single degree (default: 2..6)")
    solve.add_argument("--stokes", action="store_true", help="Add Stokes equality rows")
    solve.add_argument("--compare-stokes", action="store_true", help="Solve with and without Stokes rows")
    solve.add_argument("--sides", choices=["upper", "lower", "both"], default="both")
    solve.add_argument("--bonferroni-depth", type=int, help="Also compute Bonferroni truncations at this depth")
    solve.add_argument("--basis", choices=["monomial", "chebyshev"], default="monomial")
    solve.add_argument("--gate", choices=["moment", "test_function"], default="moment", help="Stokes degree gate")
    solve.add_argument("--mc-n", type=int, help="Monte Carlo samples for a sandwich check")
    solve.add_argument("--seed", type=int, default=0, help="Monte Carlo seed (default: 0)")
    solve.add_argument("--shards", type=int, default=1, help="Monte Carlo shards (default: 1)")
    solve.add_argument("--export-sdpa", type=Path, help="Write the relaxation(s) in SDPA sparse format")
    solve.add_argument("--no-solve", action="store_true", help="Only export, do not solve")
    solve.add_argument("--csv", type=Path, help="Write the report as CSV")
    solve.add_argument("--json", type=Path, help="Write the report as JSON")
    solve.add_argument("--workers", type=int, help="Parallel jobs (default: MOMENT_BOUNDS_WORKERS or 1)")
    solve.add_argument("--moment-order", type=int, default=2, help="Extract moments up to this degree (default: 2)")
    solve.add_argument("--allow-high-degree", action="store_true", help=f"Allow degrees above {MAX_DEGREE}")
    solve.add_argument("--solver", help="Conic solver name (default: first installed)")
    solve.add_argument("--gap-tol", type=float)
    solve.add_argument("--feas-tol", type=float)
    solve.add_argument("--max-iter", type=int)

    check = commands.add_parser("check", parents=[common], help="Check a report against Monte Carlo")
    check.add_argument("problem", type=Path, help="Problem file (*.prob)")
    check.add_argument("--report", type=Path, help="Report written by 'solve --csv' or 'solve --json'")
    check.add_argument("--mc-n", type=int, default=1_000_000, help="Monte Carlo samples (default: 1e6)")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--shards", type=int, default=1)

    serve = commands.add_parser("serve", parents=[common], help="Start the API server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000, help="API server port (default: 8000)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    d_min, d_max = parse_degree_range(args.d)
    settings = SolverSettings.from_env(
        solver=args.solver,
        gap_tol=args.gap_tol,
        feas_tol=args.feas_tol,
        max_iter=args.max_iter,
        verbose=args.log_level == "DEBUG",
    )
    return RunConfig(
        problem=args.problem,
        d_min=d_min,
        d_max=d_max,
        stokes=args.stokes,
        compare_stokes=args.compare_stokes,
        sides=args.sides,
        bonferroni_depth=args.bonferroni_depth,
        mc_samples=args.mc_n,
        seed=args.seed,
        shards=args.shards,
        export_sdpa=args.export_sdpa,
        no_solve=args.no_solve,
        csv_path=args.csv,
        json_path=args.json,
        workers=args.workers or default_workers(),
        moment_order=args.moment_order,
        allow_high_degree=args.allow_high_degree,
        solver=settings,
        relaxation=RelaxationOptions(basis=args.basis, stokes_gate=args.gate),
    )


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI interface; returns the exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = "INFO" if args.verbose and args.log_level == "WARNING" else args.log_level
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if args.command == "serve":
        import uvicorn

        print(f"🚀 Starting Moment Bounds API on {args.host}:{args.port}...")
        uvicorn.run(create_api_app(), host=args.host, port=args.port)
        return EXIT_OK

    if args.command == "check":
        return cmd_check(args.problem, args.report, args.mc_n, args.seed, args.shards)

    try:
        config = config_from_args(args)
    except (ValidationError, ValueError) as e:
        print(f"❌ Error: {e}")
        return EXIT_USAGE
    return cmd_solve(config, verbose=args.verbose)


if __name__ == "__main__":
    sys.exit(run_cli())
