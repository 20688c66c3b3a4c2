"""
Command-line front end.

Usage:
    semiorbit solve2 --T "2*sqrt(p^2)" --V "r" -D 3 -l 0 -n 0 --method dos-squared
    semiorbit solve2 --T "p^2/2" --V "r^2/2" -D 2 -l 0 -n 0      # dispatched to WKB
    semiorbit solve3 --T "sqrt(p^2)" --U "a*r" --V "0" --param a=0.2 -D 3 -L 0 -N 0
    semiorbit table1 [--self-test]
    semiorbit regge --a 0.2 --b 0 --qmax 8
    semiorbit check

Configuration (semiorbit.toml):
    [solver]
    bracket = [1e-8, 1e8]
    points_per_decade = 64
    root_rtol = 1e-14
    quad_tol = 1e-10

    [output]
    format = "text"   # "text", "csv" or "json"

Results go to stdout (or --output); notices go to stderr.
Exit codes: 0 success, 1 mismatch, 2 input error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Sequence

from . import __version__, catalog
from .af import AuxPotential, af2_solve, af3_solve, classify_bound, default_aux
from .config import FORMATS, METHODS, RunConfig, load_toml, merge_settings, tomllib
from .dos2 import QuantumNumbers2B, anyon_energy, anyon_lambda, dos_energy, lambda_of
from .dos3 import QuantumNumbers3B, ThreeBodySpec, dos3_energy, dos3_energy_squared, lambda3
from .errors import (
    DegenerateLambdaError,
    DomainError,
    ExpressionSyntaxError,
    NoConvergenceError,
    NonMonotoneError,
    NoOrbitError,
    NotBracketedError,
    UnknownIdentifierError,
    UnstableOrbitError,
)
from .expr import parse_model
from .oracle import Cell, FamilyReport, evaluate_cells, run_oracle_suite
from .report import SolveReport, format_solve_reports, format_table
from .wkb import wkb2_solve, wkb3_energy, wkb3_solve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

CELL_TOLERANCE = 0.001

INPUT_ERRORS = (
    ExpressionSyntaxError,
    UnknownIdentifierError,
    DomainError,
    DegenerateLambdaError,
    NotBracketedError,
    NonMonotoneError,
    TypeError,
    ValueError,
)
SOLVER_ERRORS = (NoOrbitError, UnstableOrbitError, NoConvergenceError)


# ANSI color codes for terminal output
class Colors:
    """ANSI color codes for terminal output."""
    RESET = "\033[0m"
    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    BLUE = "\033[94m"
    CYAN = "\033[96m"

    @classmethod
    def disable(cls):
        """Disable colors (for non-TTY output)."""
        cls.RESET = ""
        cls.RED = ""
        cls.GREEN = ""
        cls.YELLOW = ""
        cls.BLUE = ""
        cls.CYAN = ""


# Notices go to stderr, so that is the stream that decides
if not sys.stderr.isatty():
    Colors.disable()


def print_step(message: str, color: str | None = None) -> None:
    print(f"{color or Colors.CYAN}> {message}{Colors.RESET}", file=sys.stderr)


def print_success(message: str) -> None:
    print(f"{Colors.GREEN}OK {message}{Colors.RESET}", file=sys.stderr)


def print_error(message: str) -> None:
    print(f"{Colors.RED}error: {message}{Colors.RESET}", file=sys.stderr)


def print_warning(message: str) -> None:
    print(f"{Colors.YELLOW}warning: {message}{Colors.RESET}", file=sys.stderr)


def print_info(message: str) -> None:
    print(f"{Colors.BLUE}{message}{Colors.RESET}", file=sys.stderr)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _wkb_notice(what: str) -> None:
    message = f"{what} has no circular orbit; using WKB quantization"
    logger.info(message)
    print_warning(message)


def cmd_solve2(config: RunConfig) -> SolveReport:
    T = parse_model(config.T or "", "p", config.parameters)
    V = parse_model(config.V or "", "r", config.parameters)
    D, l, n = config.D, config.l, config.n
    inputs = {"T": config.T, "V": config.V, "D": D, "l": l, "n": n, "parameters": dict(config.parameters)}

    if config.anyon_alpha is not None:
        if D != 2:
            logger.debug("Anyon pair is planar, using D=2 instead of D=%d", D)
            D = 2
        inputs.update(D=2, anyon_alpha=config.anyon_alpha)
        lam = anyon_lambda(l, config.anyon_alpha)
    else:
        lam = lambda_of(l, D)

    method = config.method
    if lam == 0 and method in ("dos", "dos-squared"):
        if not config.dispatch:
            raise DegenerateLambdaError("lambda = 0 needs --method wkb (auto-dispatch disabled)")
        _wkb_notice(f"D={D}, l={l}")
        method = "wkb"

    if method == "wkb":
        if lam != 0:
            raise DomainError(f"WKB quantization covers lambda = 0 only, got lambda={lam:g}")
        wkb = wkb2_solve(T, V, n, config.settings)
        return SolveReport("wkb", D, l, n, wkb.turning_point, wkb.E, 0.0, wkb.E, wkb.E_squared, inputs=inputs)

    if method == "af":
        if config.anyon_alpha is not None:
            raise DomainError("The auxiliary-field method is not available for anyons")
        aux = AuxPotential(config.aux) if config.aux else default_aux(V, config.settings)
        inputs["aux"] = aux.value
        af = af2_solve(T, V, l, n, D, aux, config.settings)
        verdict = classify_bound(T, V, aux, config.settings)
        return SolveReport(
            "af", D, l, n, af.r0, af.E, 0.0, af.E, af.E_squared,
            residual=af.diagnostics["residual"],
            roots_found=af.diagnostics["roots_found"],
            bound_class=verdict.bound.value,
            inputs=inputs,
        )

    if config.anyon_alpha is not None:
        sol = anyon_energy(T, V, l, n, config.anyon_alpha, config.settings)
    else:
        sol = dos_energy(T, V, QuantumNumbers2B(D, l, n), config.settings)
    energy = sol.E
    if method == "dos-squared":
        if sol.E_squared < 0:
            raise DomainError(f"Squared-energy variant is negative ({sol.E_squared:.6g})")
        energy = math.sqrt(sol.E_squared)
    return SolveReport(
        method, D, l, n, sol.r0, sol.E0, sol.deltaE, energy, sol.E_squared,
        residual=sol.diagnostics["residual"],
        roots_found=sol.diagnostics["roots_found"],
        inputs=inputs,
    )


def cmd_solve3(config: RunConfig) -> SolveReport:
    spec = ThreeBodySpec.from_sources(config.T or "", config.U or "0", config.V or "0", parameters=config.parameters)
    D, L, N = config.D, config.L, config.N
    inputs = {
        "T": config.T, "U": config.U or "0", "V": config.V or "0",
        "D": D, "L": L, "N": N, "parameters": dict(config.parameters),
    }
    method = config.method
    if lambda3(L, D) == 0 and method in ("dos", "dos-squared"):
        if not config.dispatch:
            raise DegenerateLambdaError("lambda = 0 needs --method wkb (auto-dispatch disabled)")
        _wkb_notice(f"D={D}, L={L}")
        method = "wkb"

    if method == "wkb":
        if lambda3(L, D) != 0:
            raise DomainError("WKB quantization covers D=2, L=0 only")
        wkb = wkb3_solve(spec, N, config.settings)
        return SolveReport("wkb", D, L, N, wkb.turning_point, wkb.E, 0.0, wkb.E, wkb.E_squared, inputs=inputs)

    if method == "af":
        af = af3_solve(spec, L, N, D, config.settings)
        return SolveReport(
            "af", D, L, N, af.r0, af.E, 0.0, af.E, af.E_squared,
            residual=af.diagnostics["residual"],
            roots_found=af.diagnostics["roots_found"],
            inputs=inputs,
        )

    sol = dos3_energy(spec, QuantumNumbers3B(D, L, N), config.settings)
    energy = sol.E
    if method == "dos-squared":
        if sol.E_squared < 0:
            raise DomainError(f"Squared-energy variant is negative ({sol.E_squared:.6g})")
        energy = math.sqrt(sol.E_squared)
    return SolveReport(
        method, D, L, N, sol.r0, sol.E0, sol.deltaE, energy, sol.E_squared,
        residual=sol.diagnostics["residual"],
        roots_found=sol.diagnostics["roots_found"],
        inputs=inputs,
    )


@dataclass(frozen=True)
class Table1Row:
    l: int
    n: int
    lagrange: float
    dos_published: float
    dos: float
    af_published: float
    af: float

    @property
    def matches(self) -> bool:
        return (
            abs(self.dos - self.dos_published) <= CELL_TOLERANCE
            and abs(self.af - self.af_published) <= CELL_TOLERANCE
        )


def cmd_table1(config: RunConfig) -> list[Table1Row]:
    """Recompute the DOS and AF lines of the meson table (a=1, D=3)."""
    reference = catalog.table1_reference()
    if config.self_test:
        reference = reference.perturbed(0, 0, 0.01)
    T, V = catalog.meson_hamiltonian(1.0)
    settings = config.settings

    def dos(l: int, n: int) -> float:
        return math.sqrt(dos_energy(T, V, QuantumNumbers2B(3, l, n), settings).E_squared)

    def af(l: int, n: int) -> float:
        return af2_solve(T, V, l, n, 3, AuxPotential.HARMONIC, settings).E

    cells = []
    for row in reference.rows:
        cells.append(Cell(f"dos l={row.l} n={row.n}", partial(dos, row.l, row.n), partial(float, row.dos)))
        cells.append(Cell(f"af l={row.l} n={row.n}", partial(af, row.l, row.n), partial(float, row.af)))
    results = evaluate_cells(cells, config.workers)

    rows = []
    for i, row in enumerate(reference.rows):
        dos, af = results[2 * i], results[2 * i + 1]
        if dos.error or af.error:
            raise NoOrbitError(f"Table cell l={row.l} n={row.n} failed: {dos.error or af.error}")
        rows.append(Table1Row(row.l, row.n, row.lagrange, row.dos, dos.value, row.af, af.value))
    return rows


@dataclass(frozen=True)
class ReggeRow:
    Q: int
    L: int
    N: int
    E_dos: float
    E_dos_reference: float
    E_af: float
    E_af_reference: float

    @property
    def matches(self) -> bool:
        return (
            abs(self.E_dos - self.E_dos_reference) <= CELL_TOLERANCE
            and abs(self.E_af - self.E_af_reference) <= CELL_TOLERANCE
        )


def cmd_regge(config: RunConfig) -> list[ReggeRow]:
    """Baryon levels by number of quanta ``Q = L + 2N``, checked against the closed forms."""
    spec = catalog.baryon_spec(config.a, config.b)
    D, settings = config.D, config.settings
    reference = catalog.fig1_curves(config.a, config.b, config.qmax, D)

    def dos(L: int, N: int) -> float:
        if lambda3(L, D) == 0:
            return wkb3_energy(spec, N, settings)
        return math.sqrt(dos3_energy_squared(spec, QuantumNumbers3B(D, L, N), settings))

    def af(L: int, N: int) -> float:
        return af3_solve(spec, L, N, D, settings).E

    cells = []
    for ref in reference:
        cells.append(Cell(f"dos Q={ref.Q} L={ref.L} N={ref.N}", partial(dos, ref.L, ref.N), partial(float, ref.E_dos)))
        cells.append(Cell(f"af Q={ref.Q} L={ref.L} N={ref.N}", partial(af, ref.L, ref.N), partial(float, ref.E_af)))
    results = evaluate_cells(cells, config.workers)

    rows = []
    for i, ref in enumerate(reference):
        dos_result, af_result = results[2 * i], results[2 * i + 1]
        if dos_result.error or af_result.error:
            raise NoOrbitError(f"Regge cell Q={ref.Q} L={ref.L} N={ref.N} failed: {dos_result.error or af_result.error}")
        rows.append(ReggeRow(ref.Q, ref.L, ref.N, dos_result.value, ref.E_dos, af_result.value, ref.E_af))
    return rows


def cmd_check(config: RunConfig) -> list[FamilyReport]:
    return run_oracle_suite(config.settings, config.workers)


# --------------------------------------------------------------------------
# Argument handling
# --------------------------------------------------------------------------


def _parameter(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip().isidentifier():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format (default: text)")
    common.add_argument("--output", "-o", default=None, help="Write results to FILE instead of stdout")
    common.add_argument("--config", "-c", type=Path, default=None, help="TOML configuration file (default: semiorbit.toml if present)")
    common.add_argument("--tol", type=float, default=None, help="Relative tolerance of root refinement")
    common.add_argument("--quad-tol", type=float, default=None, help="Absolute tolerance of WKB quadrature")
    common.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"), default=None, help="Radius scan range")
    common.add_argument("--points-per-decade", type=int, default=None, help="Density of the radius scan grid")
    common.add_argument("--workers", type=int, default=4, help="Concurrent cells for grid commands")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="semiorbit",
        description="Semiclassical spectra of two- and three-body Hamiltonians",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    semiorbit solve2 --T "2*sqrt(p^2)" --V "r" -D 3 -l 0 -n 0 --method dos-squared
    semiorbit solve3 --T "p^2/2" --U "r^2" --V "r^2" -D 3 -L 2 -N 1
    semiorbit table1
    semiorbit regge --a 0.2 --b 0 --qmax 8 --format csv
        """,
    )
    parser.add_argument("--version", action="version", version=f"semiorbit {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_model_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--T", required=True, help="Kinetic energy as a function of p")
        p.add_argument("--V", required=True, help="Potential as a function of r")
        p.add_argument("-D", type=int, default=3, help="Space dimension (default: 3)")
        p.add_argument("--method", choices=METHODS, default="dos")
        p.add_argument("--param", type=_parameter, action="append", default=[], metavar="NAME=VALUE",
                       help="Bind a named constant used in the expressions")
        p.add_argument("--no-dispatch", action="store_true", help="Treat lambda = 0 as an error instead of using WKB")

    solve2 = sub.add_parser("solve2", parents=[common], help="Two-body level")
    add_model_options(solve2)
    solve2.add_argument("-l", type=int, default=0, help="Orbital quantum number")
    solve2.add_argument("-n", type=int, default=0, help="Radial quantum number")
    solve2.add_argument("--aux", choices=[a.value for a in AuxPotential], default=None,
                        help="Auxiliary potential for --method af")
    solve2.add_argument("--anyon-alpha", type=float, default=None, help="Two-anyon statistics parameter in [0, 1]")

    solve3 = sub.add_parser("solve3", parents=[common], help="Three identical particles")
    add_model_options(solve3)
    solve3.add_argument("--U", default="0", help="One-body potential as a function of r")
    solve3.add_argument("-L", type=int, default=0, help="Total orbital quantum number")
    solve3.add_argument("-N", type=int, default=0, help="Total radial quantum number")

    table1 = sub.add_parser("table1", parents=[common], help="Reproduce the meson table")
    table1.add_argument("--self-test", action="store_true", help="Perturb one reference cell; must fail")

    regge = sub.add_parser("regge", parents=[common], help="Baryon levels by number of quanta")
    regge.add_argument("--a", type=float, default=0.2)
    regge.add_argument("--b", type=float, default=0.0)
    regge.add_argument("--qmax", type=int, default=8)
    regge.add_argument("-D", type=int, default=3)

    sub.add_parser("check", parents=[common], help="Cross-validate pipelines against closed forms")
    return parser.parse_args(argv)


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the TOML file and command-line flags."""
    file_data = load_toml(args.config)
    if file_data:
        print_info(f"Loading config from: {args.config or 'semiorbit.toml'}")
    settings = merge_settings(
        file_data,
        {
            "bracket": tuple(args.bracket) if args.bracket else None,
            "root_rtol": args.tol,
            "quad_tol": args.quad_tol,
            "points_per_decade": args.points_per_decade,
        },
    )
    output_format = args.format or file_data.get("output", {}).get("format", "text")

    values = {
        "subcommand": args.subcommand,
        "output_format": output_format,
        "output": args.output,
        "workers": args.workers,
        "settings": settings,
    }
    for name in ("T", "U", "V", "D", "l", "n", "L", "N", "method", "aux", "anyon_alpha", "a", "b", "qmax"):
        if getattr(args, name, None) is not None:
            values[name] = getattr(args, name)
    if hasattr(args, "param"):
        values["parameters"] = dict(args.param)
    if hasattr(args, "no_dispatch"):
        values["dispatch"] = not args.no_dispatch
    if hasattr(args, "self_test"):
        values["self_test"] = args.self_test
    return RunConfig(**values)


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("semiorbit").setLevel(level)


def _render(config: RunConfig) -> tuple[str, int]:
    fmt = config.output_format
    if config.subcommand == "solve2":
        return format_solve_reports([cmd_solve2(config)], fmt), EXIT_OK
    if config.subcommand == "solve3":
        return format_solve_reports([cmd_solve3(config)], fmt), EXIT_OK
    if config.subcommand == "table1":
        rows = cmd_table1(config)
        columns = ("l", "n", "lagrange", "dos_published", "dos", "af_published", "af", "status")
        table = [
            (r.l, r.n, r.lagrange, r.dos_published, r.dos, r.af_published, r.af, "ok" if r.matches else "MISMATCH")
            for r in rows
        ]
        bad = sum(not r.matches for r in rows)
        if bad:
            print_error(f"{bad} table cell(s) differ from the published values by more than {CELL_TOLERANCE}")
        else:
            print_success("All 16 table cells match the published values")
        return format_table(columns, table, fmt), EXIT_MISMATCH if bad else EXIT_OK
    if config.subcommand == "regge":
        rows = cmd_regge(config)
        table = [(r.Q, r.L, r.N, r.E_dos, r.E_af, "ok" if r.matches else "MISMATCH") for r in rows]
        bad = sum(not r.matches for r in rows)
        if bad:
            print_error(f"{bad} Regge cell(s) differ from the closed forms by more than {CELL_TOLERANCE}")
        else:
            print_success(f"All {len(rows)} Regge cells match the closed forms")
        return format_table(("Q", "L", "N", "E_DOS", "E_AF", "status"), table, fmt), EXIT_MISMATCH if bad else EXIT_OK
    print_step("Cross-validating solvers against closed forms")
    reports = cmd_check(config)
    for report in reports:
        if report.passed:
            print_success(f"{report.name}: {report.cells} cells, max rel.err {report.max_rel_error:.2e}")
        else:
            print_error(f"{report.name}: {len(report.failures)} of {report.cells} cells failed, first: {report.failures[0]}")
    table = [(r.name, r.cells, r.max_rel_error, r.tolerance, "pass" if r.passed else "FAIL") for r in reports]
    failed = any(not r.passed for r in reports)
    return format_table(("family", "cells", "max_rel_error", "tolerance", "status"), table, fmt), (
        EXIT_MISMATCH if failed else EXIT_OK
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point.

    Returns:
        Exit code (0 for success, non-zero for error)
    """
    args = parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        config = load_config(args)
    except (OSError, ValueError, TypeError, tomllib.TOMLDecodeError) as exc:
        print_error(f"Invalid configuration: {exc}")
        return EXIT_INPUT

    try:
        text, code = _render(config)
    except SOLVER_ERRORS as exc:
        print_error(f"{type(exc).__name__}: {exc}")
        return EXIT_SOLVER
    except INPUT_ERRORS as exc:
        print_error(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT

    if config.output:
        Path(config.output).write_text(text + "\n", encoding="utf-8")
        print_info(f"Wrote {config.output}")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
