"""Command-line entry point: `nablavar <command> ...`.

Exit codes: 0 success, 1 domain error or non-convergence (outputs are still
written), 2 usage error, 3 property-suite failure. Results go to stdout or
`--out`; logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Sequence

from pydantic import ValidationError

from nablavar.calculus import antiderivative, mixed_operator, nabla_integral
from nablavar.errors import BadParam, HViolated, NablavarError, NotConverged
from nablavar.graph import graph
from nablavar.oracle import run_suite
from nablavar.state import (
    CheckOutput,
    GridFunction,
    ProblemSpec,
    RunConfig,
    ScaleSpec,
    SolveState,
    SolveSummary,
    SuiteOutput,
    TimeScale,
)
from nablavar.timescale import h_coefficients, index_of, scale_from_spec
from nablavar.utils import (
    configure_logging,
    dump_model,
    format_grid,
    format_scale_table,
    format_solution,
    get_settings,
    load_model,
    read_grid,
    write_text,
)
from nablavar.variational import el_residual, problem_from_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_SUITE = 3

DEFAULT_SOLUTION_PATH = "solution.csv"


class UsageError(Exception):
    """Command-line arguments are inconsistent."""


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser(default_seed: int = 0, default_trials: int = 100) -> argparse.ArgumentParser:
    """Return the argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="nablavar",
        description="Nabla calculus of variations on finite time scales.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    scale = commands.add_parser("scale", help="Time-scale utilities.")
    scale_commands = scale.add_subparsers(dest="scale_command", required=True)
    inspect = scale_commands.add_parser(
        "inspect", help="Print points, graininess and jump tables as CSV."
    )
    inspect.add_argument("--scale", required=True, help="Scale JSON file or inline spec.")
    inspect.add_argument("--order", type=int, default=2, help="Order r for condition (H).")
    inspect.add_argument("--out")

    diff = commands.add_parser("diff", help="Apply f -> f^{rho^k nabla^i} to a CSV.")
    diff.add_argument("input", help="CSV with columns t,value.")
    diff.add_argument("--scale", required=True)
    diff.add_argument("--order", type=int, default=1, help="Number of nabla derivatives i.")
    diff.add_argument("--rho", type=int, default=0, help="Number of rho compositions k.")
    diff.add_argument("--out")

    integrate = commands.add_parser(
        "integrate", help="Nabla antiderivative, or the integral over [from, to]."
    )
    integrate.add_argument("input", help="CSV with columns t,value.")
    integrate.add_argument("--scale", required=True)
    integrate.add_argument("--from", dest="lower", type=float)
    integrate.add_argument("--to", dest="upper", type=float)
    integrate.add_argument("--out")

    solve = commands.add_parser("solve", help="Solve a problem JSON.")
    solve.add_argument("problem", help="Problem JSON file or inline spec.")
    solve.add_argument("--method", choices=["direct", "newton", "brute"], default="direct")
    solve.add_argument("--sense", choices=["min", "max"], default="min")
    solve.add_argument("--seed", type=int, default=default_seed)
    solve.add_argument("--tol-grad", type=float)
    solve.add_argument("--tol-res", type=float)
    solve.add_argument("--max-iter", type=int)
    solve.add_argument("--lo", type=float, help="Brute force: lowest lattice value.")
    solve.add_argument("--hi", type=float, help="Brute force: highest lattice value.")
    solve.add_argument("--steps", type=int, help="Brute force: lattice intervals.")
    solve.add_argument("--out", default=DEFAULT_SOLUTION_PATH, help="Solution CSV path.")

    check = commands.add_parser("check", help="Euler-Lagrange report of a given y.")
    check.add_argument("problem")
    check.add_argument("--y", dest="y_path", required=True, help="CSV of y on the scale.")
    check.add_argument("--sense", choices=["min", "max"], default="min")
    check.add_argument("--out")

    suite = commands.add_parser("suite", help="Run the property suite.")
    suite.add_argument("--scale", help="Run on this scale instead of the default three.")
    suite.add_argument("--trials", type=int, default=default_trials)
    suite.add_argument("--seed", type=int, default=default_seed)
    suite.add_argument("--out")

    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    """Collect parsed arguments into a validated RunConfig."""
    values: dict[str, Any] = dict(vars(args))
    command = values.pop("command")
    if command == "scale":
        command = f"scale {values.pop('scale_command')}"
    inputs = [values.pop(key) for key in ("input", "problem") if key in values]
    fields = {k: v for k, v in values.items() if v is not None and k in RunConfig.model_fields}
    return RunConfig(command=command, inputs=inputs, **fields)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _scale(config: RunConfig) -> TimeScale:
    if config.scale is None:
        raise UsageError("--scale is required")
    return scale_from_spec(load_model(config.scale, ScaleSpec))


def _emit(text: str, path: str | None) -> None:
    write_text(text, path)
    if path is None:
        sys.stdout.write(text)


def cmd_scale_inspect(config: RunConfig) -> int:
    """Print the scale tables, preceded by the (H) coefficients as comments."""
    ts = _scale(config)
    try:
        h = h_coefficients(ts, config.order)
        law = "fixed by the family" if h.exact else "fitted"
        header = f"# rho(t) = a1*t + a0 with a1={h.a1!r}, a0={h.a0!r} ({law}, r={config.order})\n"
    except HViolated as exc:
        header = f"# condition (H) fails for r={config.order}: {exc}\n"
    except BadParam as exc:
        raise UsageError(str(exc)) from exc
    _emit(header + format_scale_table(ts), config.out)
    return EXIT_OK


def cmd_diff(config: RunConfig) -> int:
    """Apply the mixed operator to a grid-function CSV."""
    ts = _scale(config)
    f = read_grid(config.inputs[0], ts)
    _emit(format_grid(mixed_operator(f, config.rho, config.order)), config.out)
    return EXIT_OK


def cmd_integrate(config: RunConfig) -> int:
    """Write the antiderivative, or a single row holding the integral to `--to`."""
    ts = _scale(config)
    f = read_grid(config.inputs[0], ts)
    lower = ts.points[f.start] if config.lower is None else config.lower
    if config.upper is None:
        result = antiderivative(f, lower)
    else:
        value = nabla_integral(f, lower, config.upper)
        result = GridFunction.on(ts, [value], start=index_of(ts, config.upper))
    _emit(format_grid(result), config.out)
    return EXIT_OK


def _solve_options(config: RunConfig) -> dict[str, Any]:
    return {
        "seed": config.seed,
        "tol_grad": config.tol_grad,
        "tol_res": config.tol_res,
        "max_iter": config.max_iter,
        "lo": config.lo,
        "hi": config.hi,
        "steps": config.steps,
    }


def cmd_solve(config: RunConfig) -> int:
    """Run the solve pipeline; write the solution CSV and print the summary JSON."""
    spec = load_model(config.inputs[0], ProblemSpec)
    state: SolveState = {
        "spec": spec,
        "method": config.method,
        "sense": config.sense,
        "options": _solve_options(config),
    }
    result = graph.invoke(state)
    if result.get("error_message"):
        sys.stderr.write(f"nablavar: {result['error_message']}\n")
        return EXIT_DOMAIN

    solution = result["solution"]
    problem = result["problem"]
    sign = -1.0 if config.sense == "max" else 1.0
    summary = SolveSummary(
        method=solution.method,
        sense=config.sense,
        objective=sign * solution.objective,
        el_sup_norm=solution.el_sup_norm,
        iterations=solution.iterations,
        converged=solution.converged,
        lattice_bound=solution.lattice_bound,
        note=solution.message,
    )
    write_text(format_solution(solution.y, problem.order), config.out)
    sys.stdout.write(dump_model(summary))
    if not solution.converged:
        raise NotConverged(f"{solution.method} did not converge: {solution.message}", solution)
    return EXIT_OK


def cmd_check(config: RunConfig) -> int:
    """Print the Euler-Lagrange report of the y CSV as JSON."""
    if config.y_path is None:
        raise UsageError("--y is required")
    spec = load_model(config.inputs[0], ProblemSpec)
    problem = problem_from_spec(spec, sense=config.sense, allow_degenerate=True)
    y = read_grid(config.y_path, problem.scale)
    report = el_residual(problem, y)
    output = CheckOutput(
        order=problem.order,
        a1=report.a1,
        coefficients=list(report.coefficients),
        exchange_factors=list(report.exchange_factors),
        sup_norm=report.sup_norm,
        term_sup_norms=[term.sup_norm() for term in report.terms],
        domain_start=report.residual.start,
        residual_csv=format_grid(report.residual),
    )
    _emit(dump_model(output), config.out)
    return EXIT_OK


def cmd_suite(config: RunConfig) -> int:
    """Run the property suite and print the TrialReports as JSON."""
    scales = [_scale(config)] if config.scale is not None else None
    reports = run_suite(scales, trials=config.trials, seed=config.seed)
    output = SuiteOutput(
        seed=config.seed,
        trials=config.trials,
        passed=all(report.passed for report in reports),
        reports=reports,
    )
    _emit(dump_model(output), config.out)
    return EXIT_OK if output.passed else EXIT_SUITE


COMMANDS = {
    "scale inspect": cmd_scale_inspect,
    "diff": cmd_diff,
    "integrate": cmd_integrate,
    "solve": cmd_solve,
    "check": cmd_check,
    "suite": cmd_suite,
}


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run(argv: Sequence[str]) -> int:
    """Execute one command and return its exit code.

    Args:
        argv: Arguments without the program name.

    Returns:
        0 on success, 1 on a domain error or non-convergence, 2 on a usage
        error, 3 when the property suite reports a failure.
    """
    try:
        settings = get_settings()
    except ValidationError as exc:
        sys.stderr.write(f"nablavar: invalid environment: {exc}\n")
        return EXIT_USAGE
    configure_logging(settings.log_level)

    parser = build_parser(settings.default_seed, settings.suite_trials)
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        config = to_run_config(args)
    except ValidationError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"nablavar: invalid arguments: {exc}\n")
        return EXIT_USAGE

    try:
        return COMMANDS[config.command](config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"nablavar: {exc}\n")
        return EXIT_USAGE
    except (NablavarError, ValidationError, OSError) as exc:
        logger.debug("Command %s failed", config.command, exc_info=True)
        sys.stderr.write(f"nablavar: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    """Console-script entry point."""
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
