"""Higher-order fundamental lemma of the calculus of variations.

Pairing: P(f, eta) = int_{sigma^{r-1}(a)}^b sum_i f_i eta^{rho^{r-i} nabla^i} nabla t.
The lemma says that if P(f, eta) = 0 for every admissible eta, then the
alternating sum S = sum_i (-1)^i (1/a1)^{i(i-1)/2} f_i^{nabla^i} vanishes.

Each trial checks three things:

  * forward: f_i = L_{u_i} along the stationary point of a random strictly
    convex quadratic problem pairs to zero with a random admissible eta;
  * for r = 1, f = (g^nabla, g) pairs to zero for any g (integration by parts)
    and f = (0, c) pairs to zero for a constant c;
  * contrapositive: for random f_i with S != 0 some coordinate variation
    e_j pairs to a nonzero value, namely nu(t_{j+r}) S(t_{j+r}).
"""

from __future__ import annotations

import logging

import numpy as np

from nablavar.calculus import mixed_operator, nabla_derivative, restrict
from nablavar.errors import Degenerate
from nablavar.expr import lagrangian_from_expression
from nablavar.solvers import solve_el_newton
from nablavar.state import GridFunction, TimeScale, TrialReport
from nablavar.timescale import h_coefficients
from nablavar.variational import (
    admissible_variation,
    alternating_sum,
    build_problem,
    pair_with_variation,
    partial_grids,
)

logger = logging.getLogger(__name__)

TOLERANCE = 1e-8
NONZERO_SUM = 1e-6


def random_quadratic_source(r: int, rng: np.random.Generator) -> str:
    """Return a strictly convex quadratic Lagrangian of order r as source text."""
    terms = [f"{rng.uniform(0.5, 1.5):.6f}*u{i}^2" for i in range(r + 1)]
    d = rng.uniform(-1.0, 1.0)
    sign = "-" if d < 0 else "+"
    return " + ".join(terms) + f" {sign} {abs(d):.6f}*t*u0"


def pairing_magnitude(fs: list[GridFunction], eta: GridFunction) -> float:
    """Return 1 + int sum_i |f_i| |eta^{rho^{r-i} nabla^i}|, the scale of a pairing."""
    r = len(fs) - 1
    nu = eta.scale.graininess[r:]
    total = 1.0
    for i, f in enumerate(fs):
        stack = mixed_operator(eta, r - i, i).array
        total += float(np.dot(nu, np.abs(restrict(f, r).array * stack)))
    return total


def _random_functions(ts: TimeScale, r: int, rng: np.random.Generator) -> list[GridFunction]:
    size = len(ts.points) - r
    return [GridFunction.on(ts, rng.uniform(-1.0, 1.0, size), start=r) for _ in range(r + 1)]


def _coordinate(ts: TimeScale, j: int) -> GridFunction:
    e = np.zeros(len(ts.points))
    e[j] = 1.0
    return GridFunction.on(ts, e)


def _stationary_defect(ts: TimeScale, r: int, rng: np.random.Generator) -> float:
    source = random_quadratic_source(r, rng)
    alphas = rng.uniform(-1.0, 1.0, r)
    betas = rng.uniform(-1.0, 1.0, r)
    problem = build_problem(ts, r, lagrangian_from_expression(source, r), alphas, betas)
    solution = solve_el_newton(problem)
    if not solution.converged:
        return float("inf")
    fs = partial_grids(problem, solution.y)
    eta = admissible_variation(problem, rng.uniform(-1.0, 1.0, len(problem.free_indices)))
    return abs(pair_with_variation(fs, eta)) / pairing_magnitude(fs, eta)


def _first_order_defect(ts: TimeScale, rng: np.random.Generator) -> float:
    g = GridFunction.on(ts, rng.uniform(-1.0, 1.0, len(ts.points)))
    eta_values = np.concatenate(([0.0], rng.uniform(-1.0, 1.0, len(ts.points) - 2), [0.0]))
    eta = GridFunction.on(ts, eta_values)
    by_parts = [nabla_derivative(g), restrict(g, 1)]
    constant = [
        GridFunction.on(ts, np.zeros(ts.n), start=1),
        GridFunction.on(ts, np.full(ts.n, rng.uniform(-1.0, 1.0)), start=1),
    ]
    return max(
        abs(pair_with_variation(fs, eta)) / pairing_magnitude(fs, eta)
        for fs in (by_parts, constant)
    )


def _contrapositive_defect(
    ts: TimeScale, r: int, a1: float, rng: np.random.Generator
) -> float | None:
    fs = _random_functions(ts, r, rng)
    total = alternating_sum(fs, a1)
    if total.sup_norm() < NONZERO_SUM:
        return None
    nu = ts.graininess
    worst = 0.0
    best = 0.0
    for j in range(r, ts.n - r + 1):
        eta = _coordinate(ts, j)
        pairing = pair_with_variation(fs, eta)
        expected = nu[j + r] * total.array[j - r]
        worst = max(worst, abs(pairing - expected) / pairing_magnitude(fs, eta))
        best = max(best, abs(pairing))
    if best <= TOLERANCE:
        return float("inf")
    return worst


def check_fundamental_lemma(ts: TimeScale, r: int, trials: int, seed: int = 0) -> TrialReport:
    """Run the forward and contrapositive fundamental-lemma checks.

    Trial k draws from seed + k.

    Raises:
        HViolated: If r > 1 and the scale does not satisfy condition (H).
        Degenerate: If the scale has fewer than 2r + 1 points.
    """
    a1 = h_coefficients(ts, r).a1
    if len(ts.points) < 2 * r + 1:
        raise Degenerate(f"order {r} needs at least {2 * r + 1} points")

    failures = 0
    worst = 0.0
    failed_seeds: list[int] = []
    for k in range(trials):
        rng = np.random.default_rng(seed + k)
        defects = [_stationary_defect(ts, r, rng)]
        if r == 1:
            defects.append(_first_order_defect(ts, rng))
        contrapositive = _contrapositive_defect(ts, r, a1, rng)
        if contrapositive is not None:
            defects.append(contrapositive)
        defect = max(defects)
        worst = max(worst, defect)
        if defect > TOLERANCE:
            failures += 1
            failed_seeds.append(seed + k)

    if failures:
        logger.warning("Fundamental lemma failed %d of %d trials (r=%d)", failures, trials, r)
    return TrialReport(
        name=f"fundamental_lemma_r{r}",
        trials=trials,
        failures=failures,
        worst_defect=worst,
        tolerance=TOLERANCE,
        seeds=failed_seeds,
    )
