"""VERIFY node.

Recomputes the Euler-Lagrange report along the returned extremal so the
caller can read per-term diagnostics next to the solution.
"""

from __future__ import annotations

import logging
from typing import Any

from nablavar.errors import NablavarError
from nablavar.state import SolveState
from nablavar.variational import el_residual

logger = logging.getLogger(__name__)


def verify_node(state: SolveState) -> dict[str, Any]:
    """Attach the ELReport of the solution.

    Returns:
        Dictionary with `report`, or `error_message` if the residual cannot be
        evaluated along the solution.
    """
    solution = state.get("solution")
    if solution is None:
        return {"report": None}
    try:
        report = el_residual(state["problem"], solution.y)
    except NablavarError as exc:
        logger.exception("Euler-Lagrange verification failed")
        return {"report": None, "error_message": f"{type(exc).__name__}: {exc}"}

    if solution.converged:
        logger.info("Verified extremal: EL sup-norm %.3e", report.sup_norm)
    else:
        logger.warning(
            "Solution not converged (%s); EL sup-norm %.3e",
            solution.message,
            report.sup_norm,
        )
    return {"report": report}
