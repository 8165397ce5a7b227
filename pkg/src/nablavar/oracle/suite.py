"""Runs every property check on a list of scales in a fixed order."""

from __future__ import annotations

import logging
from typing import Sequence

from nablavar.oracle.fundamental import check_fundamental_lemma
from nablavar.oracle.identities import check_identity_suite
from nablavar.oracle.positivity import check_positivity
from nablavar.oracle.vanishing import check_vanishing_lemmas
from nablavar.state import TimeScale, TrialReport
from nablavar.timescale import audit_point_classes, make_lattice, satisfies_h

logger = logging.getLogger(__name__)

SUITE_ORDERS = (1, 2)


def default_suite_scales() -> list[TimeScale]:
    """Return Z on [0, 10], the 0.5-lattice on [0, 5] and 2^N on [1, 64]."""
    return [
        make_lattice("integer_lattice", None, 0.0, 10.0),
        make_lattice("h_lattice", {"h": 0.5}, 0.0, 5.0),
        make_lattice("q_lattice", {"q": 2.0}, 1.0, 64.0),
    ]


def scale_label(ts: TimeScale) -> str:
    """Return a short label such as `q_lattice(2)[1,64]`."""
    param = "" if ts.param is None else f"({ts.param:g})"
    return f"{ts.family}{param}[{ts.points[0]:g},{ts.points[-1]:g}]"


def _labelled(report: TrialReport, label: str) -> TrialReport:
    return report.model_copy(update={"name": f"{label}:{report.name}"})


def run_suite(
    scales: Sequence[TimeScale] | None = None,
    trials: int = 100,
    seed: int = 0,
) -> list[TrialReport]:
    """Run the property checks on every scale.

    Per scale the order is: point-class audit, identities, positivity, then
    the vanishing and fundamental lemmas for each order the scale supports
    (condition (H) and enough points).
    """
    reports: list[TrialReport] = []
    for ts in scales if scales is not None else default_suite_scales():
        label = scale_label(ts)
        scale_reports = [
            audit_point_classes(ts),
            check_identity_suite(ts, trials, seed),
            check_positivity(ts),
        ]
        for r in SUITE_ORDERS:
            if r > 1 and not satisfies_h(ts, r):
                logger.info("Skipping order %d on %s: condition (H) fails", r, label)
                continue
            if len(ts.points) >= 2 * (r + 1):
                scale_reports.append(check_vanishing_lemmas(ts, r, trials, seed))
            if len(ts.points) >= 2 * r + 1:
                scale_reports.append(check_fundamental_lemma(ts, r, trials, seed))
        reports.extend(_labelled(report, label) for report in scale_reports)

    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.warning("Suite failures: %s", ", ".join(failed))
    else:
        logger.info("Suite passed: %d reports", len(reports))
    return reports
