"""LangGraph solve pipeline.

Flow:
  START → PREPARE → (DIRECT | NEWTON | BRUTE) → VERIFY → END

PREPARE routes to END when the problem cannot be built or is degenerate
(2r points); a solver routes to END when it raises a domain error.
"""

from __future__ import annotations

from typing import Literal

from langgraph.graph import END, START, StateGraph  # type: ignore[import-untyped]

from nablavar.nodes import brute_node, direct_node, newton_node, prepare_node, verify_node
from nablavar.state import SolveState

# ---------------------------------------------------------------------------
# Routing Functions
# ---------------------------------------------------------------------------


def route_after_prepare(
    state: SolveState,
) -> Literal["direct", "newton", "brute", "__end__"]:
    """Dispatch to the requested solver.

    Returns "__end__" if preparation failed.
    Returns the method name otherwise ("direct" when missing).
    """
    if state.get("error_message"):
        return "__end__"
    return state.get("method", "direct")


def route_after_solve(
    state: SolveState,
) -> Literal["verify", "__end__"]:
    """Verify a returned solution; end if the solver failed."""
    if state.get("error_message") or state.get("solution") is None:
        return "__end__"
    return "verify"


# ---------------------------------------------------------------------------
# Graph Definition
# ---------------------------------------------------------------------------

builder = StateGraph(SolveState)

builder.add_node("prepare", prepare_node)
builder.add_node("direct", direct_node)
builder.add_node("newton", newton_node)
builder.add_node("brute", brute_node)
builder.add_node("verify", verify_node)

builder.add_edge(START, "prepare")
builder.add_conditional_edges(
    "prepare",
    route_after_prepare,
    {"direct": "direct", "newton": "newton", "brute": "brute", "__end__": END},
)
for method in ("direct", "newton", "brute"):
    builder.add_conditional_edges(
        method,
        route_after_solve,
        {"verify": "verify", "__end__": END},
    )
builder.add_edge("verify", END)

graph = builder.compile(name="Nabla Variational Solver")
