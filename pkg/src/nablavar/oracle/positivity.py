"""Positivity of the nabla integral, checked exhaustively on small scales.

If f >= 0 and int_a^b f nabla t = 0 then f vanishes on [a,b]_kappa, that is on
every point of (a, b]. The value at a itself is never read by the integral,
so an indicator of {a} integrates to zero without vanishing on [a, b].
"""

from __future__ import annotations

import itertools
import logging

import numpy as np

from nablavar.calculus import nabla_integral
from nablavar.state import GridFunction, TimeScale, TrialReport
from nablavar.timescale import custom_scale, index_of

logger = logging.getLogger(__name__)

MAX_POINTS = 8


def check_positivity(
    ts: TimeScale,
    a: float | None = None,
    b: float | None = None,
) -> TrialReport:
    """Enumerate every {0,1}-valued function on [a, b] (at most 8 points).

    Larger windows are truncated to their first 8 points. One extra trial
    checks the mass-at-the-minimum shape: the indicator of {a} must integrate
    to zero while not vanishing on [a, b].
    """
    ia = 0 if a is None else index_of(ts, a)
    ib = ts.n if b is None else index_of(ts, b)
    window = ts.points[ia : ib + 1]
    if len(window) > MAX_POINTS:
        logger.debug("Positivity window truncated from %d to %d points", len(window), MAX_POINTS)
        window = window[:MAX_POINTS]
    sub = custom_scale(list(window))
    lo, hi = sub.points[0], sub.points[-1]

    trials = failures = 0
    worst = 0.0
    for bits in itertools.product((0.0, 1.0), repeat=len(window)):
        f = GridFunction.on(sub, bits)
        trials += 1
        if nabla_integral(f, lo, hi) == 0.0:
            defect = float(np.max(f.array[1:]))
            worst = max(worst, defect)
            if defect != 0.0:
                failures += 1

    mass_at_minimum = GridFunction.on(sub, [1.0] + [0.0] * (len(window) - 1))
    trials += 1
    if nabla_integral(mass_at_minimum, lo, hi) != 0.0 or mass_at_minimum.sup_norm() == 0.0:
        failures += 1

    if failures:
        logger.warning("Positivity check failed %d of %d trials", failures, trials)
    return TrialReport(
        name="positivity",
        trials=trials,
        failures=failures,
        worst_defect=worst,
        tolerance=0.0,
    )
