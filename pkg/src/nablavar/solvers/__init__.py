"""Extremal solvers for problem (P)."""

from nablavar.solvers.brute import brute_force_min, default_value_grid
from nablavar.solvers.common import DiscreteProblem, initial_guess
from nablavar.solvers.direct import default_tol_grad, solve_direct
from nablavar.solvers.newton import default_tol_res, solve_el_newton

__all__ = [
    "DiscreteProblem",
    "brute_force_min",
    "default_tol_grad",
    "default_tol_res",
    "default_value_grid",
    "initial_guess",
    "solve_direct",
    "solve_el_newton",
]
