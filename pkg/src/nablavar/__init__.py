"""Nabla calculus of variations on finite time scales.

This package exposes the solve pipeline graph and the main entry points.
"""

from nablavar.graph import graph
from nablavar.state import GridFunction, TimeScale
from nablavar.timescale import make_lattice
from nablavar.variational import build_problem, el_residual, evaluate_functional

__all__ = [
    "GridFunction",
    "TimeScale",
    "build_problem",
    "el_residual",
    "evaluate_functional",
    "graph",
    "make_lattice",
]
