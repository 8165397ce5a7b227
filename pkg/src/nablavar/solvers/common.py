"""Shared machinery for the solvers.

`DiscreteProblem` turns problem (P) into functions of the free values only.
The mixed operators y -> y^{rho^{r-i} nabla^i} and the nabla derivatives of
the residual are linear, so they are tabulated once as matrices by applying
the calculus operators to unit grid functions. Objective, gradient and
residual are then plain numpy products; the reported `Solution` is always
re-derived through `evaluate_functional` and `el_residual`.
"""

from __future__ import annotations

import functools
import logging
from typing import Callable

import numpy as np

from nablavar.calculus import mixed_operator, nabla_derivative_n, restrict
from nablavar.errors import DegenerateProblem, EvalError
from nablavar.state import GridFunction, Solution, SolveMethod, TimeScale
from nablavar.variational import (
    VariationalProblem,
    admissible_function,
    el_residual,
    evaluate_functional,
    pin_boundary,
)

logger = logging.getLogger(__name__)

JACOBIAN_STEP = 1e-7


@functools.lru_cache(maxsize=64)
def tabulate_operators(
    points: tuple[float, ...],
    r: int,
) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """Tabulate the linear operators of order r on a point set.

    Returns:
        `stack[i]` maps y on the whole scale to y^{rho^{r-i} nabla^i} on
        points[r..N]; `derivatives[i]` maps a function on points[r..N] to its
        i-th nabla derivative on points[2r..N].
    """
    scale = TimeScale(points=points)
    size = len(points)
    stack = tuple(
        np.column_stack(
            [mixed_operator(GridFunction.on(scale, e), r - i, i).array for e in np.eye(size)]
        )
        for i in range(r + 1)
    )
    inner = np.eye(size - r)
    derivatives = tuple(
        np.column_stack(
            [
                restrict(nabla_derivative_n(GridFunction.on(scale, e, start=r), i), 2 * r).array
                for e in inner
            ]
        )
        if size > 2 * r
        else np.zeros((0, size - r))
        for i in range(r + 1)
    )
    for matrix in stack + derivatives:
        matrix.setflags(write=False)
    return stack, derivatives


class DiscreteProblem:
    """Objective, exact gradient and EL residual as functions of the free values."""

    def __init__(self, problem: VariationalProblem) -> None:
        """Tabulate the linear operators of the problem's scale and order."""
        self.problem = problem
        r = problem.order
        scale = problem.scale
        size = scale.n + 1

        left, right = pin_boundary(problem)
        self.template = np.concatenate((left, np.zeros(size - 2 * r), right))
        self.free = slice(r, size - r)
        self.t = scale.array[r:]
        self.weights = scale.graininess[r:]
        self.stack, self.derivatives = tabulate_operators(scale.points, r)

    @property
    def n_free(self) -> int:
        """Number of free values, N + 1 - 2r."""
        return self.template.size - 2 * self.problem.order

    def full(self, x: np.ndarray) -> np.ndarray:
        """Return the values of y on the whole scale."""
        y = self.template.copy()
        y[self.free] = x
        return y

    def _stack_values(self, x: np.ndarray) -> list[np.ndarray]:
        y = self.full(x)
        return [op @ y for op in self.stack]

    def _partials(self, x: np.ndarray) -> list[np.ndarray]:
        u = self._stack_values(x)
        return [
            np.broadcast_to(np.asarray(p(self.t, u), dtype=float), self.t.shape)
            for p in self.problem.lagrangian.partials
        ]

    def objective(self, x: np.ndarray) -> float:
        """J at the free values x."""
        value = self.problem.lagrangian.value(self.t, self._stack_values(x))
        return float(np.dot(self.weights, np.broadcast_to(value, self.t.shape)))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Return the first variation of J against each coordinate variation."""
        partials = self._partials(x)
        grad = np.zeros(self.n_free)
        for op, p in zip(self.stack, partials):
            grad += op[:, self.free].T @ (self.weights * p)
        return grad

    def residual(self, x: np.ndarray) -> np.ndarray:
        """Return the Euler-Lagrange residual on points[2r..N]."""
        partials = self._partials(x)
        total = np.zeros(self.n_free)
        for c, d, p in zip(self.problem.coefficients, self.derivatives, partials):
            total += c * (d @ p)
        return total


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def initial_guess(problem: VariationalProblem) -> np.ndarray:
    """Linearly interpolate the pinned values over the free points."""
    r = problem.order
    left, right = pin_boundary(problem)
    t = problem.scale.array
    pinned_t = np.concatenate((t[:r], t[problem.n - r + 1 :]))
    pinned_y = np.concatenate((left, right))
    return np.interp(t[r : problem.n - r + 1], pinned_t, pinned_y)


def forward_difference_jacobian(
    fn: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    fx: np.ndarray | None = None,
    *,
    step: float = JACOBIAN_STEP,
) -> np.ndarray:
    """Approximate d fn / dx column by column with step `step * (1 + |x_j|)`.

    Raises:
        EvalError: If fn cannot be evaluated at a shifted point.
    """
    fx = fn(x) if fx is None else fx
    jac = np.empty((fx.size, x.size))
    for j in range(x.size):
        h = step * (1.0 + abs(x[j]))
        shifted = x.copy()
        shifted[j] += h
        jac[:, j] = (fn(shifted) - fx) / h
    return jac


def sup_norm(v: np.ndarray) -> float:
    """Return max |v_k| (0 for an empty vector)."""
    return float(np.max(np.abs(v))) if v.size else 0.0


def safe(fn: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], float]:
    """Map evaluation failures to +inf so line searches back off."""

    def wrapped(x: np.ndarray) -> float:
        try:
            return fn(x)
        except EvalError:
            return float("inf")

    return wrapped


def require_free_values(problem: VariationalProblem) -> None:
    """Reject 2r-point problems, which have nothing to solve for."""
    if problem.degenerate:
        raise DegenerateProblem(
            "a 2r-point problem has no free values; use evaluate_functional instead"
        )


def finish(
    problem: VariationalProblem,
    x: np.ndarray,
    *,
    method: SolveMethod,
    iterations: int,
    converged: bool,
    history: list[float] | None = None,
    lattice_bound: float | None = None,
    message: str = "",
) -> Solution:
    """Assemble a `Solution`, recomputing objective and residual on the reporting path."""
    y = admissible_function(problem, x)
    objective = evaluate_functional(problem, y)
    el_sup_norm = 0.0 if problem.degenerate else el_residual(problem, y).sup_norm
    if not converged:
        logger.warning("%s solver did not converge: %s", method, message)
    return Solution(
        y=y,
        objective=objective,
        el_sup_norm=el_sup_norm,
        method=method,
        iterations=iterations,
        converged=converged,
        objective_history=tuple(history or ()),
        lattice_bound=lattice_bound,
        message=message,
    )
