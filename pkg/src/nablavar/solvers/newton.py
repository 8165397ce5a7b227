"""Newton iteration on the Euler-Lagrange residual.

The map from the N+1-2r free values to the residual on points[2r..N] is
square, so the discrete Euler-Lagrange equation is solved as a nonlinear
system with a forward-difference Jacobian and a halving line search.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from nablavar.errors import EvalError, SingularJacobian
from nablavar.solvers.common import (
    DiscreteProblem,
    finish,
    forward_difference_jacobian,
    initial_guess,
    require_free_values,
    sup_norm,
)
from nablavar.state import Solution
from nablavar.variational import VariationalProblem

logger = logging.getLogger(__name__)

TOL_RES_RELATIVE = 1e-10
DEFAULT_MAX_ITER = 50
HALVINGS = 30


def default_tol_res(problem: VariationalProblem) -> float:
    """Return 1e-10 * (1 + largest |boundary datum|)."""
    data = np.abs(np.concatenate((problem.bc.alphas, problem.bc.betas)))
    return TOL_RES_RELATIVE * (1.0 + float(np.max(data)))


def solve_el_newton(
    problem: VariationalProblem,
    *,
    tol_res: float | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
    init: Sequence[float] | None = None,
) -> Solution:
    """Solve the Euler-Lagrange equation for the free values.

    Args:
        problem: The variational problem.
        tol_res: Residual sup-norm tolerance; defaults to `default_tol_res`.
        max_iter: Newton iteration budget.
        init: Starting free values; defaults to linear interpolation of the
            pinned values.

    Returns:
        The last iterate, with `converged=False` if the tolerance was not met.

    Raises:
        DegenerateProblem: On a 2r-point scale.
        SingularJacobian: If a Newton system cannot be solved.
    """
    require_free_values(problem)
    disc = DiscreteProblem(problem)
    tol = default_tol_res(problem) if tol_res is None else tol_res
    x = initial_guess(problem) if init is None else np.asarray(init, dtype=float).copy()

    res = disc.residual(x)
    norm = sup_norm(res)
    iterations = 0
    message = ""
    logger.info("Newton solve: %d unknowns, |F0|=%.3e, tol=%.1e", x.size, norm, tol)

    while norm > tol and iterations < max_iter:
        jac = forward_difference_jacobian(disc.residual, x, res)
        try:
            direction = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(f"Newton Jacobian is singular at iteration {iterations}") from exc
        if not np.all(np.isfinite(direction)):
            raise SingularJacobian(f"Newton step is not finite at iteration {iterations}")

        step = 1.0
        for _ in range(HALVINGS):
            candidate = x + step * direction
            try:
                candidate_res = disc.residual(candidate)
            except EvalError:
                step *= 0.5
                continue
            if sup_norm(candidate_res) < norm:
                break
            step *= 0.5
        else:
            message = f"line search exhausted at residual {norm:.3e}"
            logger.warning("Newton %s", message)
            break

        x, res = candidate, candidate_res
        norm = sup_norm(res)
        iterations += 1
        logger.debug("Newton iteration %d: |F|=%.3e (step %.3g)", iterations, norm, step)

    converged = norm <= tol
    if not converged and not message:
        message = f"residual {norm:.3e} above tolerance {tol:.3e} after {iterations} iterations"
    solution = finish(
        problem,
        x,
        method="newton",
        iterations=iterations,
        converged=converged,
        message=message,
    )
    logger.info("Newton solve finished: %d iterations, J=%.12g", iterations, solution.objective)
    return solution
