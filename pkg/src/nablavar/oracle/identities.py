"""Calculus identities on finite time scales, checked on random grid functions.

Every check takes the scale, two grid functions f and g on the whole scale
and a random generator (for auxiliary choices such as points or weights),
and returns `(defect, magnitude)`; a trial fails when defect exceeds
1e-12 * magnitude. Checks that do not apply to the scale return None.

New identities are added by registering them in `IDENTITY_CHECKS`.
"""

from __future__ import annotations

import logging
from typing import Callable, Literal, Optional

import numpy as np

from nablavar.calculus import (
    antiderivative,
    compose_rho,
    integration_by_parts_defect,
    linear_combination,
    mixed_operator,
    nabla_derivative,
    nabla_derivative_n,
    nabla_integral,
    product,
    restrict,
)
from nablavar.errors import HViolated
from nablavar.state import GridFunction, TimeScale, TrialReport
from nablavar.timescale import h_coefficients

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
MAX_EXCHANGE = 3

IdentityCheck = Callable[
    [TimeScale, GridFunction, GridFunction, np.random.Generator],
    Optional[tuple[float, float]],
]


def _abs_integral(f: GridFunction) -> float:
    # Sum over (points[0], b] restricted to the domain of f.
    first = max(f.start, 1)
    nu = f.scale.graininess[first : f.stop + 1]
    values = f.array[first - f.start :]
    return float(np.dot(nu, np.abs(values)))


def _sup(*fs: GridFunction) -> float:
    return max(f.sup_norm() for f in fs)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def reconstruction(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """f^rho = f - nu f^nabla on T_kappa."""
    nu = ts.graininess[1:]
    derivative = nabla_derivative(f)
    lhs = compose_rho(f, 1).array
    rhs = f.array[1:] - nu * derivative.array
    return float(np.max(np.abs(lhs - rhs))), 1.0 + float(np.max(np.abs(nu * derivative.array)))


def integration_by_parts_rho(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """int f^rho g^nabla = [f g] - int f^nabla g."""
    return _by_parts(ts, f, g, "rho")


def integration_by_parts_plain(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """int f g^nabla = [f g] - int f^nabla g^rho."""
    return _by_parts(ts, f, g, "plain")


def _by_parts(
    ts: TimeScale, f: GridFunction, g: GridFunction, variant: Literal["rho", "plain"]
) -> tuple[float, float]:
    a, b = ts.points[0], ts.points[-1]
    defect = abs(integration_by_parts_defect(f, g, a, b, variant))
    f_nabla, g_nabla = nabla_derivative(f), nabla_derivative(g)
    magnitude = (
        1.0
        + 2.0 * _sup(f) * _sup(g)
        + _abs_integral(product(f_nabla, g))
        + _abs_integral(product(f, g_nabla))
        + _abs_integral(product(compose_rho(f, 1), g_nabla))
        + _abs_integral(product(f_nabla, compose_rho(g, 1)))
    )
    return defect, magnitude


def single_step(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """int_{rho(t)}^t f nabla tau = nu(t) f(t)."""
    j = int(rng.integers(1, ts.n + 1))
    value = nabla_integral(f, ts.points[j - 1], ts.points[j])
    expected = ts.graininess[j] * f.array[j]
    return abs(value - expected), 1.0 + abs(expected)


def product_rule_rho_right(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """(f g)^nabla = f^nabla g + f^rho g^nabla."""
    lhs = nabla_derivative(product(f, g))
    first = product(nabla_derivative(f), g)
    second = product(compose_rho(f, 1), nabla_derivative(g))
    rhs = linear_combination([1.0, 1.0], [first, second])
    return float(np.max(np.abs(lhs.array - rhs.array))), 1.0 + _sup(first, second)


def product_rule_rho_left(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """(f g)^nabla = f g^nabla + f^nabla g^rho."""
    lhs = nabla_derivative(product(f, g))
    first = restrict(product(f, nabla_derivative(g)), 1)
    second = product(nabla_derivative(f), compose_rho(g, 1))
    rhs = linear_combination([1.0, 1.0], [first, second])
    return float(np.max(np.abs(lhs.array - rhs.array))), 1.0 + _sup(first, second)


def linearity(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """Nabla derivative and integral are linear."""
    alpha, beta = rng.uniform(-2.0, 2.0, 2)
    combined = linear_combination([alpha, beta], [f, g])
    df, dg = nabla_derivative(f), nabla_derivative(g)
    derivative_defect = np.max(
        np.abs(nabla_derivative(combined).array - (alpha * df.array + beta * dg.array))
    )
    a, b = ts.points[0], ts.points[-1]
    integral_defect = abs(
        nabla_integral(combined, a, b)
        - (alpha * nabla_integral(f, a, b) + beta * nabla_integral(g, a, b))
    )
    magnitude = 1.0 + (abs(alpha) + abs(beta)) * (
        _sup(df, dg) + _abs_integral(f) + _abs_integral(g)
    )
    return float(max(derivative_defect, integral_defect)), magnitude


def additivity(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """int_a^c + int_c^b = int_a^b."""
    a, b = ts.points[0], ts.points[-1]
    c = ts.points[int(rng.integers(0, ts.n + 1))]
    split = nabla_integral(f, a, c) + nabla_integral(f, c, b)
    return abs(split - nabla_integral(f, a, b)), 1.0 + _abs_integral(f)


def positivity(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """f > 0 on a nonempty interval implies int_a^b f > 0.

    The integrand 1 + |f| is strictly positive, so its integral must reach
    int_a^b 1 = b - a; a zero or negative integral is a defect of at least b - a.
    """
    a, b = ts.points[0], ts.points[-1]
    positive = GridFunction.on(ts, 1.0 + np.abs(f.array))
    value = nabla_integral(positive, a, b)
    return max(0.0, (b - a) - value), 1.0 + abs(value)


def fundamental_theorem(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float]:
    """(int_a^t f nabla tau)^nabla = f on T_kappa."""
    derivative = nabla_derivative(antiderivative(f, ts.points[0]))
    defect = float(np.max(np.abs(derivative.array - f.array[1:])))
    return defect, 1.0 + _sup(f) + _abs_integral(f) / float(np.min(ts.graininess[1:]))


def rho_nabla_commute(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float] | None:
    """f^{rho nabla} = a1 f^{nabla rho} on T_{kappa^2} under condition (H)."""
    return _exchange(ts, f, 1, 1)


def rho_nabla_exchange(
    ts: TimeScale, f: GridFunction, g: GridFunction, rng: np.random.Generator
) -> tuple[float, float] | None:
    """f^{rho^k nabla^i} = a1^{ik} f^{nabla^i rho^k} under condition (H), 1 <= k, i <= 3."""
    if ts.n < 2:
        return None
    k = int(rng.integers(1, min(MAX_EXCHANGE, ts.n - 1) + 1))
    i = int(rng.integers(1, min(MAX_EXCHANGE, ts.n - k) + 1))
    return _exchange(ts, f, k, i)


def _exchange(ts: TimeScale, f: GridFunction, k: int, i: int) -> tuple[float, float] | None:
    if ts.n < k + i:
        return None
    try:
        a1 = h_coefficients(ts, 2).a1
    except HViolated:
        return None
    lhs = mixed_operator(f, k, i)
    rhs = compose_rho(nabla_derivative_n(f, i), k)
    factor = a1 ** (i * k)
    defect = float(np.max(np.abs(lhs.array - factor * rhs.array)))
    return defect, 1.0 + _sup(lhs) + factor * _sup(rhs) + _sup(nabla_derivative_n(f, i))


IDENTITY_CHECKS: dict[str, IdentityCheck] = {
    "reconstruction": reconstruction,
    "integration_by_parts_rho": integration_by_parts_rho,
    "integration_by_parts_plain": integration_by_parts_plain,
    "single_step": single_step,
    "product_rule_rho_right": product_rule_rho_right,
    "product_rule_rho_left": product_rule_rho_left,
    "linearity": linearity,
    "additivity": additivity,
    "positivity": positivity,
    "fundamental_theorem": fundamental_theorem,
    "rho_nabla_commute": rho_nabla_commute,
    "rho_nabla_exchange": rho_nabla_exchange,
}


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def random_pair(ts: TimeScale, rng: np.random.Generator) -> tuple[GridFunction, GridFunction]:
    """Draw f and g uniformly from [-1, 1] at every point."""
    size = len(ts.points)
    return GridFunction.on(ts, rng.uniform(-1.0, 1.0, size)), GridFunction.on(
        ts, rng.uniform(-1.0, 1.0, size)
    )


def identity_reports(ts: TimeScale, trials: int, seed: int = 0) -> list[TrialReport]:
    """Run every registered identity `trials` times; trial k draws from seed + k."""
    reports = {name: TrialReport(name=name, tolerance=TOLERANCE) for name in IDENTITY_CHECKS}
    for k in range(trials):
        rng = np.random.default_rng(seed + k)
        f, g = random_pair(ts, rng)
        for name, check in IDENTITY_CHECKS.items():
            outcome = check(ts, f, g, rng)
            if outcome is None:
                continue
            defect, magnitude = outcome
            report = reports[name]
            report.trials += 1
            relative = defect / magnitude
            report.worst_defect = max(report.worst_defect, relative)
            if not relative <= TOLERANCE:
                report.failures += 1
                report.seeds.append(seed + k)
    return list(reports.values())


def check_identity_suite(ts: TimeScale, trials: int, seed: int = 0) -> TrialReport:
    """Aggregate every identity check into a single report."""
    reports = identity_reports(ts, trials, seed)
    failed = [r for r in reports if not r.passed]
    failed_seeds = sorted({s for r in failed for s in r.seeds})
    for report in failed:
        logger.warning(
            "Identity %s failed %d of %d trials (worst %.3e)",
            report.name,
            report.failures,
            report.trials,
            report.worst_defect,
        )
    return TrialReport(
        name="identities",
        trials=trials,
        failures=len(failed_seeds),
        worst_defect=max((r.worst_defect for r in reports), default=0.0),
        tolerance=TOLERANCE,
        seeds=failed_seeds,
    )
