"""Tests for graph routing functions and the compiled solve pipeline."""

from typing import Any

import pytest

from nablavar.graph import graph, route_after_prepare, route_after_solve
from nablavar.state import ProblemSpec, ScaleSpec


def _spec(**overrides: Any) -> ProblemSpec:
    fields: dict[str, Any] = {
        "scale": ScaleSpec(family="integer_lattice", a=0.0, b=4.0),
        "order": 1,
        "lagrangian": "u1^2",
        "alphas": [0.0],
        "betas": [4.0],
    }
    fields.update(overrides)
    return ProblemSpec(**fields)


class TestRouteAfterPrepare:
    """Tests for route_after_prepare function."""

    @pytest.mark.parametrize("method", ["direct", "newton", "brute"])
    def test_routes_to_requested_method(self, method: str) -> None:
        state: dict[str, Any] = {"method": method, "problem": object()}
        assert route_after_prepare(state) == method  # type: ignore[arg-type]

    def test_defaults_to_direct(self) -> None:
        state: dict[str, Any] = {}
        assert route_after_prepare(state) == "direct"  # type: ignore[arg-type]

    def test_routes_to_end_on_error(self) -> None:
        state: dict[str, Any] = {"method": "newton", "error_message": "DegenerateProblem: ..."}
        assert route_after_prepare(state) == "__end__"  # type: ignore[arg-type]


class TestRouteAfterSolve:
    """Tests for route_after_solve function."""

    def test_routes_to_verify(self) -> None:
        state: dict[str, Any] = {"solution": object()}
        assert route_after_solve(state) == "verify"  # type: ignore[arg-type]

    def test_routes_to_end_without_solution(self) -> None:
        state: dict[str, Any] = {"solution": None}
        assert route_after_solve(state) == "__end__"  # type: ignore[arg-type]

    def test_routes_to_end_on_error(self) -> None:
        state: dict[str, Any] = {"solution": object(), "error_message": "TooLarge: ..."}
        assert route_after_solve(state) == "__end__"  # type: ignore[arg-type]


class TestGraphInvoke:
    """End-to-end runs of the compiled graph."""

    @pytest.mark.parametrize("method", ["direct", "newton", "brute"])
    def test_solves_dirichlet(self, method: str) -> None:
        options = {"lo": 0.0, "hi": 4.0, "steps": 4} if method == "brute" else {}
        result = graph.invoke({"spec": _spec(), "method": method, "options": options})
        assert not result.get("error_message")
        solution = result["solution"]
        assert solution.method == method
        assert solution.objective == pytest.approx(4.0, abs=1e-8)
        assert result["report"].sup_norm < 1e-7

    def test_maximization_negates_lagrangian(self) -> None:
        result = graph.invoke({"spec": _spec(lagrangian="-u1^2"), "method": "direct", "sense": "max"})
        assert result["solution"].objective == pytest.approx(4.0, abs=1e-8)
        assert result["problem"].lagrangian.source() == "--u1^2.0"

    def test_degenerate_problem_ends_early(self) -> None:
        spec = _spec(
            scale=ScaleSpec(points=[0.0, 1.0, 2.0, 3.0]),
            order=2,
            lagrangian="u2^2",
            alphas=[0.0, 1.0],
            betas=[3.0, 1.0],
        )
        result = graph.invoke({"spec": spec, "method": "direct"})
        assert result["error_message"].startswith("DegenerateProblem:")
        assert result.get("solution") is None

    def test_bad_expression_ends_early(self) -> None:
        result = graph.invoke({"spec": _spec(lagrangian="u1 +"), "method": "direct"})
        assert result["error_message"].startswith("ExpressionSyntaxError:")

    def test_solver_error_ends_before_verify(self) -> None:
        options = {"lo": 0.0, "hi": 4.0, "steps": 1000}
        result = graph.invoke({"spec": _spec(), "method": "brute", "options": options})
        assert result["error_message"].startswith("TooLarge:")
        assert result.get("report") is None

    def test_missing_spec(self) -> None:
        result = graph.invoke({"method": "direct"})
        assert result["error_message"] == "no problem or problem spec given"
