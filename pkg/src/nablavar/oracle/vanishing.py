"""Boundary-vanishing lemmas for admissible variations.

With r+1 vanishing rows at each end,

  * at b: eta^{nabla^i}(b) = 0 for i = 0..r implies eta^{rho nabla^{i-1}}(b) = 0
    for i = 1..r;
  * at sigma^r(a): eta^{nabla^i}(sigma^r(a)) = 0 for i = 0..r implies
    eta^{nabla^i}(sigma^i(a)) = 0 for i = 0..r-1.

Random eta are built by pinning r+1 zero rows per side and drawing the values
in between uniformly from [-1, 1].
"""

from __future__ import annotations

import logging

import numpy as np

from nablavar.calculus import mixed_operator, nabla_derivative_n
from nablavar.errors import Degenerate
from nablavar.state import GridFunction, TimeScale, TrialReport
from nablavar.timescale import h_coefficients
from nablavar.variational import pin_rows

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12


def random_vanishing_variation(ts: TimeScale, rows: int, rng: np.random.Generator) -> GridFunction:
    """Return eta with `rows` vanishing nabla rows at points[rows-1] and at b."""
    zeros = [0.0] * rows
    left, right = pin_rows(ts, zeros, zeros)
    middle = rng.uniform(-1.0, 1.0, len(ts.points) - 2 * rows)
    return GridFunction.on(ts, np.concatenate((left, middle, right)))


def vanishing_defects(eta: GridFunction, r: int) -> tuple[float, float]:
    """Return the worst |eta^{rho nabla^j}(b)| and |eta^{nabla^i}(sigma^i(a))|, j, i < r."""
    at_end = max(abs(mixed_operator(eta, 1, j).array[-1]) for j in range(r))
    at_start = max(abs(nabla_derivative_n(eta, i).array[0]) for i in range(r))
    return float(at_end), float(at_start)


def check_vanishing_lemmas(ts: TimeScale, r: int, trials: int, seed: int = 0) -> TrialReport:
    """Check both vanishing lemmas on `trials` random variations.

    Trial k draws from seed + k.

    Raises:
        HViolated: If r > 1 and the scale does not satisfy condition (H).
        Degenerate: If the scale has fewer than 2r + 2 points.
    """
    h_coefficients(ts, r)
    if len(ts.points) < 2 * (r + 1):
        raise Degenerate(f"order {r} needs {2 * (r + 1)} points for r+1 rows per side")

    failures = 0
    worst = 0.0
    failed_seeds: list[int] = []
    for k in range(trials):
        rng = np.random.default_rng(seed + k)
        eta = random_vanishing_variation(ts, r + 1, rng)
        defect = max(vanishing_defects(eta, r))
        worst = max(worst, defect)
        if defect > TOLERANCE:
            failures += 1
            failed_seeds.append(seed + k)

    if failures:
        logger.warning("Vanishing lemmas failed %d of %d trials (r=%d)", failures, trials, r)
    return TrialReport(
        name=f"vanishing_lemmas_r{r}",
        trials=trials,
        failures=failures,
        worst_defect=worst,
        tolerance=TOLERANCE,
        seeds=failed_seeds,
    )
