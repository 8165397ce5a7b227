"""PREPARE node.

Builds the variational problem from its JSON description (negating L for
`sense="max"`) and rejects 2r-point problems before any solver runs.
"""

from __future__ import annotations

import logging
from typing import Any

from pydantic import ValidationError

from nablavar.errors import DegenerateProblem, NablavarError
from nablavar.state import SolveState
from nablavar.variational import problem_from_spec

logger = logging.getLogger(__name__)


def prepare_node(state: SolveState) -> dict[str, Any]:
    """Build and validate the problem.

    Args:
        state: Pipeline state with `spec` (and optional `sense`) or `problem`.

    Returns:
        Dictionary with `problem`, or `error_message` on failure.
    """
    problem = state.get("problem")
    if problem is None:
        spec = state.get("spec")
        if spec is None:
            return {"error_message": "no problem or problem spec given"}
        try:
            problem = problem_from_spec(
                spec,
                sense=state.get("sense", "min"),
                allow_degenerate=True,
            )
        except (NablavarError, ValidationError) as exc:
            logger.exception("Problem construction failed")
            return {"error_message": f"{type(exc).__name__}: {exc}"}

    if problem.degenerate:
        exc = DegenerateProblem(
            f"{len(problem.scale.points)} points = 2r: every value is pinned, nothing to solve"
        )
        logger.info("%s", exc)
        return {"problem": problem, "error_message": f"DegenerateProblem: {exc}"}

    logger.info(
        "Prepared order-%d problem on %d points (%d free values)",
        problem.order,
        len(problem.scale.points),
        len(problem.free_indices),
    )
    return {"problem": problem}
