"""Higher-order variational problems with nabla derivatives.

Problem (P): extremize

    J[y] = int_{sigma^{r-1}(a)}^{b} L(t, y^{rho^r}(t), y^{rho^{r-1} nabla}(t), ...,
                                       y^{nabla^r}(t)) nabla t

subject to y^{nabla^i}(sigma^{r-1}(a)) = alpha_i and y^{nabla^i}(b) = beta_i for
i = 0..r-1. On a scale with points t_0 < ... < t_N the boundary rows pin y at
points[0..r-1] and points[N-r+1..N]; the N+1-2r values at points[r..N-r] are
free, and the Euler-Lagrange residual lives on points[2r..N], which has
exactly as many points.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from nablavar.calculus import (
    linear_combination,
    mixed_operator,
    nabla_derivative_n,
    nabla_integral,
    product,
    restrict,
)
from nablavar.errors import (
    BadParam,
    Degenerate,
    DegenerateProblem,
    DomainTooSmall,
    NotAdmissible,
    NotAdmissibleVariation,
)
from nablavar.expr import Lagrangian, lagrangian_from_expression
from nablavar.expr.lagrangian import Evaluator
from nablavar.state import (
    BoundaryConditions,
    ELReport,
    GridFunction,
    HCoefficients,
    ProblemSpec,
    Sense,
    TimeScale,
)
from nablavar.timescale import h_coefficients, scale_from_spec

logger = logging.getLogger(__name__)

ADMISSIBILITY_TOLERANCE = 1e-10


class VariationalProblem(BaseModel):
    """Problem (P) on a finite time scale."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scale: TimeScale
    order: int
    lagrangian: Lagrangian
    bc: BoundaryConditions
    h: HCoefficients
    degenerate: bool = False

    @property
    def n(self) -> int:
        """Index of the last scale point."""
        return self.scale.n

    @property
    def free_indices(self) -> range:
        """Indices of the free values, points[r..N-r]."""
        return range(self.order, self.n - self.order + 1)

    @property
    def residual_indices(self) -> range:
        """Indices of [a,b]_{kappa^{2r}}, points[2r..N]."""
        return range(2 * self.order, self.n + 1)

    @property
    def lower_limit(self) -> float:
        """sigma^{r-1}(a), the lower integration limit."""
        return self.scale.points[self.order - 1]

    @property
    def coefficients(self) -> tuple[float, ...]:
        """Euler-Lagrange coefficients (-1)^i (1/a1)^{i(i-1)/2}, i = 0..r."""
        return euler_lagrange_coefficients(self.h.a1, self.order)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def build_problem(
    scale: TimeScale,
    order: int,
    lagrangian: Lagrangian,
    alphas: Sequence[float],
    betas: Sequence[float],
    *,
    allow_degenerate: bool = False,
) -> VariationalProblem:
    """Validate and assemble problem (P).

    Args:
        scale: The time scale [a, b].
        order: r >= 1.
        lagrangian: Lagrangian of order r.
        alphas: alpha_0..alpha_{r-1}, rows at sigma^{r-1}(a).
        betas: beta_0..beta_{r-1}, rows at b.
        allow_degenerate: Accept a scale with exactly 2r points (evaluation only).

    Returns:
        The validated problem.

    Raises:
        BadParam: If the order, the Lagrangian order or the row counts disagree.
        DegenerateProblem: For a 2r-point scale without allow_degenerate.
        Degenerate: For fewer than 2r points.
        HViolated: If r > 1 and the scale does not satisfy condition (H).
    """
    if order < 1:
        raise BadParam(f"order r must be >= 1, got {order}")
    if lagrangian.order != order:
        raise BadParam(f"Lagrangian has order {lagrangian.order}, problem has {order}")
    if len(alphas) != order or len(betas) != order:
        raise BadParam(f"need exactly {order} alphas and {order} betas")

    count = len(scale.points)
    degenerate = False
    if count == 2 * order:
        if not allow_degenerate:
            raise DegenerateProblem(
                f"{count} points = 2r: every value is pinned by the boundary rows"
            )
        degenerate = True
    elif count < 2 * order:
        raise Degenerate(f"order {order} needs at least {2 * order + 1} points, got {count}")

    problem = VariationalProblem(
        scale=scale,
        order=order,
        lagrangian=lagrangian,
        bc=BoundaryConditions(alphas=tuple(alphas), betas=tuple(betas)),
        h=h_coefficients(scale, order),
        degenerate=degenerate,
    )
    # Count identity: one residual equation per free value.
    assert len(problem.residual_indices) == len(problem.free_indices) == count - 2 * order
    return problem


def problem_from_spec(
    spec: ProblemSpec,
    *,
    sense: Sense = "min",
    allow_degenerate: bool = False,
) -> VariationalProblem:
    """Build a problem from its JSON description; `sense="max"` negates L."""
    lagrangian = lagrangian_from_expression(spec.lagrangian, spec.order)
    if sense == "max":
        lagrangian = lagrangian.negated()
    return build_problem(
        scale_from_spec(spec.scale),
        spec.order,
        lagrangian,
        spec.alphas,
        spec.betas,
        allow_degenerate=allow_degenerate,
    )


# ---------------------------------------------------------------------------
# Boundary rows
# ---------------------------------------------------------------------------


def _back_substitute(nu: np.ndarray, anchor: int, rows: Sequence[float]) -> list[float]:
    # Known: d_j = y^{nabla^j}(t_anchor). Walk left with
    # y^{nabla^j}(t_{m-1}) = y^{nabla^j}(t_m) - nu(t_m) y^{nabla^{j+1}}(t_m).
    d = [float(v) for v in rows]
    values = [d[0]]
    for m in range(anchor, anchor - len(rows) + 1, -1):
        if not nu[m] > 0:
            raise Degenerate(f"graininess vanishes at index {m}")
        d = [d[j] - nu[m] * d[j + 1] for j in range(len(d) - 1)]
        values.append(d[0])
    return values[::-1]


def pin_rows(
    scale: TimeScale,
    alphas: Sequence[float],
    betas: Sequence[float],
) -> tuple[np.ndarray, np.ndarray]:
    """Solve m boundary rows per side for the pinned values.

    Rows are y^{nabla^i}(points[m-1]) = alphas[i] and y^{nabla^i}(b) = betas[i].

    Returns:
        Values at points[0..m-1] and at points[N-m+1..N].

    Raises:
        Degenerate: If the blocks overlap or a required graininess vanishes.
    """
    m = len(alphas)
    if len(betas) != m or m < 1:
        raise BadParam("need the same positive number of alphas and betas")
    if 2 * m > len(scale.points):
        raise Degenerate(f"{m} rows per side need {2 * m} points, scale has {len(scale.points)}")
    nu = scale.graininess
    left = _back_substitute(nu, m - 1, alphas)
    right = _back_substitute(nu, scale.n, betas)
    return np.asarray(left), np.asarray(right)


def pin_boundary(problem: VariationalProblem) -> tuple[np.ndarray, np.ndarray]:
    """Return the pinned values at points[0..r-1] and points[N-r+1..N]."""
    return pin_rows(problem.scale, problem.bc.alphas, problem.bc.betas)


def admissible_function(problem: VariationalProblem, free_values: Sequence[float]) -> GridFunction:
    """Assemble y on the whole scale from the pinned rows and the free values."""
    free = np.asarray(free_values, dtype=float)
    if free.shape != (len(problem.free_indices),):
        raise BadParam(f"expected {len(problem.free_indices)} free values, got {free.shape}")
    left, right = pin_boundary(problem)
    return GridFunction.on(problem.scale, np.concatenate((left, free, right)))


def admissible_variation(
    problem: VariationalProblem,
    free_values: Sequence[float],
) -> GridFunction:
    """Assemble eta on the whole scale: zero on the pinned blocks."""
    free = np.asarray(free_values, dtype=float)
    if free.shape != (len(problem.free_indices),):
        raise BadParam(f"expected {len(problem.free_indices)} free values, got {free.shape}")
    zeros = np.zeros(problem.order)
    return GridFunction.on(problem.scale, np.concatenate((zeros, free, zeros)))


def free_part(problem: VariationalProblem, y: GridFunction) -> np.ndarray:
    """Extract the values of y at the free indices."""
    _require_full(problem, y)
    idx = problem.free_indices
    return np.array(y.array[idx.start : idx.stop])


def boundary_defects(
    problem: VariationalProblem,
    y: GridFunction,
    alphas: Sequence[float],
    betas: Sequence[float],
) -> np.ndarray:
    """Return |y^{nabla^i}(sigma^{r-1}(a)) - alpha_i| and |y^{nabla^i}(b) - beta_i|."""
    r = problem.order
    defects = []
    for i in range(r):
        derivative = nabla_derivative_n(y, i)
        defects.append(abs(derivative.array[r - 1 - derivative.start] - alphas[i]))
        defects.append(abs(derivative.array[-1] - betas[i]))
    return np.asarray(defects)


def _require_full(problem: VariationalProblem, y: GridFunction) -> None:
    if y.scale.points != problem.scale.points or y.start != 0 or y.stop != problem.n:
        raise DomainTooSmall("the function must be defined on every point of the problem scale")


def _require_admissible(problem: VariationalProblem, y: GridFunction) -> None:
    _require_full(problem, y)
    defects = boundary_defects(problem, y, problem.bc.alphas, problem.bc.betas)
    if np.max(defects) > ADMISSIBILITY_TOLERANCE:
        raise NotAdmissible(
            f"boundary rows violated by {np.max(defects):.3e} (tolerance {ADMISSIBILITY_TOLERANCE})"
        )


def _require_admissible_variation(problem: VariationalProblem, eta: GridFunction) -> None:
    _require_full(problem, eta)
    zeros = [0.0] * problem.order
    defects = boundary_defects(problem, eta, zeros, zeros)
    if np.max(defects) > ADMISSIBILITY_TOLERANCE:
        raise NotAdmissibleVariation(
            f"variation does not vanish on the boundary rows (defect {np.max(defects):.3e})"
        )


# ---------------------------------------------------------------------------
# Functional, partials and first variation
# ---------------------------------------------------------------------------


def mixed_stack(y: GridFunction, r: int) -> list[GridFunction]:
    """Return y^{rho^{r-i} nabla^i}, i = 0..r.

    For y on the whole scale every entry lives on points[r..N].
    """
    if y.size < r + 1:
        raise DomainTooSmall(f"order {r} needs {r + 1} points, domain has {y.size}")
    return [mixed_operator(y, r - i, i) for i in range(r + 1)]


def _stack(problem: VariationalProblem, y: GridFunction) -> list[GridFunction]:
    return mixed_stack(y, problem.order)


def _sample(problem: VariationalProblem, fn: Evaluator, stack: list[GridFunction]) -> GridFunction:
    r = problem.order
    t = problem.scale.array[r:]
    raw = fn(t, [s.array for s in stack])
    values = np.broadcast_to(np.asarray(raw, dtype=float), t.shape)
    return GridFunction.on(problem.scale, values, start=r)


def evaluate_functional(problem: VariationalProblem, y: GridFunction) -> float:
    """Return J[y], the nabla integral of L over (sigma^{r-1}(a), b].

    Raises:
        DomainTooSmall: If y is not defined on the whole scale.
        NotAdmissible: If y violates a boundary row by more than 1e-10.
    """
    _require_admissible(problem, y)
    integrand = _sample(problem, problem.lagrangian.value, _stack(problem, y))
    return nabla_integral(integrand, problem.lower_limit, problem.scale.points[-1])


def partial_grids(problem: VariationalProblem, y: GridFunction) -> list[GridFunction]:
    """Return t -> L_{u_i}(t, stack(y)(t)) on points[r..N], i = 0..r."""
    _require_full(problem, y)
    stack = _stack(problem, y)
    return [_sample(problem, p, stack) for p in problem.lagrangian.partials]


def pair_with_variation(fs: Sequence[GridFunction], eta: GridFunction) -> float:
    """Return int_{sigma^{r-1}(a)}^b sum_i f_i eta^{rho^{r-i} nabla^i} nabla t.

    The order r is len(fs) - 1; eta must be defined on the whole scale.
    """
    r = len(fs) - 1
    if r < 1:
        raise BadParam(f"need at least 2 coefficient functions, got {len(fs)}")
    scale = eta.scale
    if eta.start != 0 or eta.stop != scale.n:
        raise DomainTooSmall("the variation must be defined on every scale point")
    eta_stack = mixed_stack(eta, r)
    integrand = linear_combination(
        [1.0] * (r + 1),
        [product(f, e) for f, e in zip(fs, eta_stack)],
    )
    return nabla_integral(integrand, scale.points[r - 1], scale.points[-1])


def first_variation(problem: VariationalProblem, y: GridFunction, eta: GridFunction) -> float:
    """Return phi'(0) for phi(eps) = J[y + eps eta], computed directly.

    Raises:
        NotAdmissibleVariation: If eta does not vanish on the boundary rows.
    """
    _require_admissible_variation(problem, eta)
    return pair_with_variation(partial_grids(problem, y), eta)


def weak_norm(problem: VariationalProblem, y: GridFunction) -> float:
    """Return ||y||_{r,inf} = sum_i sup |y^{rho^{r-i} nabla^i}| over [a,b]_{kappa^r}."""
    _require_full(problem, y)
    return float(sum(s.sup_norm() for s in _stack(problem, y)))


# ---------------------------------------------------------------------------
# Euler-Lagrange residual
# ---------------------------------------------------------------------------


def euler_lagrange_coefficients(a1: float, r: int) -> tuple[float, ...]:
    """Return (-1)^i (1/a1)^{i(i-1)/2} for i = 0..r."""
    inverse = 1.0 / a1
    return tuple((-1.0) ** i * inverse ** (i * (i - 1) // 2) for i in range(r + 1))


def alternating_terms(fs: Sequence[GridFunction], a1: float) -> tuple[GridFunction, ...]:
    """Return the terms (-1)^i (1/a1)^{i(i-1)/2} f_i^{nabla^i} on points[2r..N].

    The order r is len(fs) - 1 and every f_i must be defined on points[r..N].
    """
    r = len(fs) - 1
    start = 2 * r
    return tuple(
        GridFunction.on(f.scale, c * restrict(nabla_derivative_n(f, i), start).array, start)
        for i, (c, f) in enumerate(zip(euler_lagrange_coefficients(a1, r), fs))
    )


def alternating_sum(fs: Sequence[GridFunction], a1: float) -> GridFunction:
    """Return sum_i (-1)^i (1/a1)^{i(i-1)/2} f_i^{nabla^i} on points[2r..N]."""
    terms = alternating_terms(fs, a1)
    return linear_combination([1.0] * len(terms), list(terms))


def el_residual(problem: VariationalProblem, y: GridFunction) -> ELReport:
    """Evaluate sum_i (-1)^i (1/a1)^{i(i-1)/2} L_{u_i}^{nabla^i} on [a,b]_{kappa^{2r}}.

    Each L_{u_i} is sampled on points[r..N], differentiated i times, restricted
    to points[2r..N] and scaled by its coefficient.

    Raises:
        DegenerateProblem: On a 2r-point scale (the residual domain is empty).
        DomainTooSmall: If y is not defined on the whole scale.
    """
    if problem.degenerate:
        raise DegenerateProblem("a 2r-point problem has no Euler-Lagrange equation")
    r = problem.order
    terms = alternating_terms(partial_grids(problem, y), problem.h.a1)
    residual = linear_combination([1.0] * (r + 1), list(terms))
    a1 = problem.h.a1
    return ELReport(
        residual=residual,
        sup_norm=residual.sup_norm(),
        terms=terms,
        coefficients=problem.coefficients,
        a1=a1,
        exchange_factors=tuple(a1 ** (i * (r - i)) for i in range(r + 1)),
    )
