"""Tests for the direct, Newton and brute-force solvers."""

import numpy as np
import pytest

from nablavar.errors import BadParam, DegenerateProblem, TooLarge
from nablavar.expr import lagrangian_from_expression
from nablavar.solvers import (
    DiscreteProblem,
    brute_force_min,
    default_tol_res,
    default_value_grid,
    initial_guess,
    solve_direct,
    solve_el_newton,
)
from nablavar.state import TimeScale
from nablavar.timescale import custom_scale
from nablavar.variational import (
    VariationalProblem,
    admissible_function,
    admissible_variation,
    build_problem,
    el_residual,
    evaluate_functional,
    first_variation,
)


@pytest.fixture
def geometric_problem(geometric: TimeScale) -> VariationalProblem:
    """A strictly convex second-order problem on 2^N [1, 64]."""
    lagrangian = lagrangian_from_expression("u2^2 + u0^2", 2)
    return build_problem(geometric, 2, lagrangian, [1.0, 0.0], [1.0, 0.0])


@pytest.fixture
def degenerate() -> VariationalProblem:
    """Four points, order two: nothing is free."""
    scale = custom_scale([0.0, 1.0, 2.0, 3.0])
    lagrangian = lagrangian_from_expression("u2^2", 2)
    return build_problem(scale, 2, lagrangian, [0.0, 1.0], [3.0, 1.0], allow_degenerate=True)


class TestDiscreteProblem:
    """The tabulated operators agree with the reporting path."""

    def test_objective_gradient_residual(self, half_lattice: TimeScale) -> None:
        lagrangian = lagrangian_from_expression("u2^2 + sin(u0)*u1 + t*u1^2", 2)
        problem = build_problem(half_lattice, 2, lagrangian, [0.0, 1.0], [1.0, 0.0])
        disc = DiscreteProblem(problem)
        x = np.array([0.3, -0.2, 0.5])
        y = admissible_function(problem, x)

        assert disc.n_free == 3
        np.testing.assert_allclose(disc.full(x), y.array)
        assert disc.objective(x) == pytest.approx(evaluate_functional(problem, y), rel=1e-12)
        for k in range(3):
            eta = admissible_variation(problem, np.eye(3)[k])
            assert disc.gradient(x)[k] == pytest.approx(first_variation(problem, y, eta), rel=1e-10, abs=1e-12)
        np.testing.assert_allclose(disc.residual(x), el_residual(problem, y).residual.array, rtol=1e-10, atol=1e-12)

    def test_initial_guess_interpolates(self, dirichlet: VariationalProblem) -> None:
        np.testing.assert_allclose(initial_guess(dirichlet), [1.0, 2.0, 3.0])


class TestSolveDirect:
    """Tests for solve_direct."""

    def test_dirichlet(self, dirichlet: VariationalProblem) -> None:
        solution = solve_direct(dirichlet, init=[0.0, 0.0, 0.0])
        assert solution.converged
        assert solution.method == "direct"
        np.testing.assert_allclose(solution.y.array, [0.0, 1.0, 2.0, 3.0, 4.0], atol=1e-8)
        assert solution.objective == pytest.approx(4.0, abs=1e-9)
        assert solution.el_sup_norm < 1e-7
        history = solution.objective_history
        assert len(history) >= 2
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_second_order_on_q_lattice(self, geometric_problem: VariationalProblem) -> None:
        solution = solve_direct(geometric_problem)
        assert solution.converged
        assert solution.el_sup_norm < 1e-6
        assert "global optimality not certified" in solution.message

    @pytest.mark.parametrize("seed", [0, 3, 17])
    def test_history_never_increases(self, geometric_problem: VariationalProblem, seed: int) -> None:
        solution = solve_direct(geometric_problem, seed=seed)
        history = solution.objective_history
        assert all(b <= a for a, b in zip(history, history[1:]))
        assert history[-1] == pytest.approx(solution.objective, rel=1e-12)

    def test_seed_moves_only_the_start(self, geometric_problem: VariationalProblem) -> None:
        plain = solve_direct(geometric_problem)
        disc = DiscreteProblem(geometric_problem)
        assert plain.objective_history[0] == disc.objective(initial_guess(geometric_problem))

        seeded = solve_direct(geometric_problem, seed=3)
        again = solve_direct(geometric_problem, seed=3)
        assert seeded.objective_history[0] != plain.objective_history[0]
        assert seeded.objective_history == again.objective_history
        assert seeded.y.values == again.y.values
        assert seeded.converged
        np.testing.assert_allclose(seeded.y.array, plain.y.array, rtol=0, atol=1e-8)

    def test_degenerate(self, degenerate: VariationalProblem) -> None:
        with pytest.raises(DegenerateProblem):
            solve_direct(degenerate)


class TestSolveNewton:
    """Tests for solve_el_newton."""

    def test_dirichlet(self, dirichlet: VariationalProblem) -> None:
        solution = solve_el_newton(dirichlet, init=[0.0, 0.0, 0.0])
        assert solution.converged
        assert solution.method == "newton"
        assert 1 <= solution.iterations <= 5
        np.testing.assert_allclose(solution.y.array, [0.0, 1.0, 2.0, 3.0, 4.0], atol=1e-8)
        assert solution.el_sup_norm <= default_tol_res(dirichlet)

    def test_agrees_with_direct(self, geometric_problem: VariationalProblem) -> None:
        newton = solve_el_newton(geometric_problem)
        direct = solve_direct(geometric_problem)
        assert newton.converged
        np.testing.assert_allclose(newton.y.array, direct.y.array, rtol=0, atol=1e-8)
        assert newton.objective == pytest.approx(direct.objective, rel=1e-9)

    def test_budget_exhausted(self, dirichlet: VariationalProblem) -> None:
        solution = solve_el_newton(dirichlet, init=[0.0, 0.0, 0.0], max_iter=0)
        assert not solution.converged
        assert solution.iterations == 0
        assert "after 0 iterations" in solution.message

    def test_default_tolerance(self, dirichlet: VariationalProblem) -> None:
        assert default_tol_res(dirichlet) == pytest.approx(5e-10)

    def test_degenerate(self, degenerate: VariationalProblem) -> None:
        with pytest.raises(DegenerateProblem):
            solve_el_newton(degenerate)


class TestBruteForce:
    """Tests for brute_force_min."""

    def test_finds_lattice_minimizer(self, dirichlet: VariationalProblem) -> None:
        solution = brute_force_min(dirichlet, lo=0.0, hi=4.0, steps=4)
        assert solution.y.values == (0.0, 1.0, 2.0, 3.0, 4.0)
        assert solution.objective == 4.0
        assert solution.iterations == 125
        assert solution.lattice_bound == 0.0
        assert solution.converged

    def test_agrees_with_direct_within_bound(self, dirichlet: VariationalProblem) -> None:
        brute = brute_force_min(dirichlet, lo=0.0, hi=4.0, steps=8)
        direct = solve_direct(dirichlet)
        assert direct.objective <= brute.objective + 1e-9

    def test_gap_estimate_on_coarse_lattice(self, dirichlet: VariationalProblem) -> None:
        """Values {0, 1.5, 3}: best (0, 1.5, 3) with J = 5.5 and gradient (-3, 0, 1)."""
        solution = brute_force_min(dirichlet, lo=0.0, hi=3.0, steps=2)
        assert solution.y.values == (0.0, 0.0, 1.5, 3.0, 4.0)
        assert solution.objective == pytest.approx(5.5)
        assert solution.lattice_bound == pytest.approx(1.5 * 4.0)
        assert "first-order gap estimate" in solution.message
        direct = solve_direct(dirichlet)
        assert solution.objective - direct.objective <= solution.lattice_bound

    def test_default_grid(self, dirichlet: VariationalProblem) -> None:
        assert default_value_grid(dirichlet) == (0.0, 4.0, 10)

    def test_degenerate_has_one_candidate(self, degenerate: VariationalProblem) -> None:
        solution = brute_force_min(degenerate, lo=0.0, hi=1.0, steps=3)
        assert solution.iterations == 1
        assert solution.objective == 2.0
        assert solution.el_sup_norm == 0.0

    def test_guard(self, dirichlet: VariationalProblem) -> None:
        with pytest.raises(TooLarge):
            brute_force_min(dirichlet, lo=0.0, hi=4.0, steps=1000)

    @pytest.mark.parametrize(("lo", "hi", "steps"), [(1.0, 1.0, 4), (2.0, 1.0, 4), (0.0, 1.0, 0)])
    def test_bad_grid(self, dirichlet: VariationalProblem, lo: float, hi: float, steps: int) -> None:
        with pytest.raises(BadParam):
            brute_force_min(dirichlet, lo=lo, hi=hi, steps=steps)
