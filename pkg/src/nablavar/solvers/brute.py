"""Exhaustive lattice search over the free values: an independent oracle."""

from __future__ import annotations

import itertools
import logging

import numpy as np

from nablavar.errors import BadParam, TooLarge
from nablavar.solvers.common import DiscreteProblem, finish, safe
from nablavar.state import Solution
from nablavar.variational import VariationalProblem, pin_boundary

logger = logging.getLogger(__name__)

MAX_CANDIDATES = 10**7
DEFAULT_STEPS = 10


def default_value_grid(problem: VariationalProblem) -> tuple[float, float, int]:
    """Span the pinned values with DEFAULT_STEPS steps."""
    left, right = pin_boundary(problem)
    pinned = np.concatenate((left, right))
    lo, hi = float(np.min(pinned)), float(np.max(pinned))
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi, DEFAULT_STEPS


def brute_force_min(
    problem: VariationalProblem,
    *,
    lo: float,
    hi: float,
    steps: int,
) -> Solution:
    """Enumerate every free-value tuple on the lattice lo + k (hi - lo) / steps.

    Candidates are visited in lexicographic order and only a strictly better
    objective replaces the incumbent, so ties go to the lexicographically
    smallest tuple. A 2r-point problem has exactly one candidate.

    `lattice_bound` on the result is resolution * ||grad J(best)||_1, a
    first-order estimate of the gap to the continuous optimum. It is not a
    certified bound: curvature across the cell can exceed it.

    Raises:
        BadParam: If steps < 1 or lo >= hi.
        TooLarge: If (steps + 1)^(free count) exceeds 10^7.
    """
    if steps < 1 or not lo < hi:
        raise BadParam(f"need lo < hi and steps >= 1, got lo={lo}, hi={hi}, steps={steps}")
    disc = DiscreteProblem(problem)
    count = (steps + 1) ** disc.n_free
    if count > MAX_CANDIDATES:
        raise TooLarge(
            f"{steps + 1}^{disc.n_free} = {count} candidates exceed the guard of {MAX_CANDIDATES}"
        )
    logger.info("Brute force: %d candidates on [%g, %g]", count, lo, hi)

    grid = np.linspace(lo, hi, steps + 1)
    objective = safe(disc.objective)
    best_x = None
    best_value = np.inf
    for candidate in itertools.product(grid, repeat=disc.n_free):
        x = np.asarray(candidate, dtype=float)
        value = objective(x)
        if value < best_value:
            best_x, best_value = x, value
    if best_x is None:
        raise BadParam("no lattice candidate has a finite objective")

    # First-order only: exact when the gradient is constant over the lattice cell.
    resolution = (hi - lo) / steps
    estimate = resolution * float(np.sum(np.abs(disc.gradient(best_x))))
    return finish(
        problem,
        best_x,
        method="brute",
        iterations=count,
        converged=True,
        history=[best_value],
        lattice_bound=estimate,
        message=f"lattice optimum; first-order gap estimate to the continuous optimum {estimate:.3e}",
    )
