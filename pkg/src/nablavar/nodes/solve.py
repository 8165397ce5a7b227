"""Solver nodes: one per method, all reading tolerances from `options`."""

from __future__ import annotations

import logging
from typing import Any, Callable

from nablavar.errors import NablavarError
from nablavar.solvers import (
    brute_force_min,
    default_value_grid,
    solve_direct,
    solve_el_newton,
)
from nablavar.state import Solution, SolveState
from nablavar.variational import VariationalProblem

logger = logging.getLogger(__name__)


def _run(
    state: SolveState,
    method: str,
    solve: Callable[[VariationalProblem, dict[str, Any]], Solution],
) -> dict[str, Any]:
    problem = state["problem"]
    options = state.get("options") or {}
    try:
        solution = solve(problem, options)
    except NablavarError as exc:
        logger.exception("%s solve failed", method)
        return {"solution": None, "error_message": f"{type(exc).__name__}: {exc}"}
    return {"solution": solution}


def _direct(problem: VariationalProblem, options: dict[str, Any]) -> Solution:
    kwargs: dict[str, Any] = {"seed": options.get("seed", 0)}
    if options.get("tol_grad") is not None:
        kwargs["tol_grad"] = options["tol_grad"]
    if options.get("max_iter") is not None:
        kwargs["max_iter"] = options["max_iter"]
    return solve_direct(problem, **kwargs)


def _newton(problem: VariationalProblem, options: dict[str, Any]) -> Solution:
    kwargs: dict[str, Any] = {}
    if options.get("tol_res") is not None:
        kwargs["tol_res"] = options["tol_res"]
    if options.get("max_iter") is not None:
        kwargs["max_iter"] = options["max_iter"]
    return solve_el_newton(problem, **kwargs)


def _brute(problem: VariationalProblem, options: dict[str, Any]) -> Solution:
    lo, hi, steps = default_value_grid(problem)
    return brute_force_min(
        problem,
        lo=options.get("lo") if options.get("lo") is not None else lo,
        hi=options.get("hi") if options.get("hi") is not None else hi,
        steps=options.get("steps") if options.get("steps") is not None else steps,
    )


def direct_node(state: SolveState) -> dict[str, Any]:
    """Minimize J with BFGS and a Newton polish."""
    return _run(state, "direct", _direct)


def newton_node(state: SolveState) -> dict[str, Any]:
    """Solve the Euler-Lagrange equation with Newton's method."""
    return _run(state, "newton", _newton)


def brute_node(state: SolveState) -> dict[str, Any]:
    """Search the value lattice exhaustively."""
    return _run(state, "brute", _brute)
