"""Shared Pydantic models and the solve-pipeline state schema.

Kept in a separate module to avoid circular imports between the numerical
modules, the solvers and `nablavar.graph`.

Core types (time scales, grid functions, reports) and the JSON input/output
schemas all live here; `scripts/export_schemas.py` writes their JSON Schemas to
`schemas/`.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Any, Literal, TypeAlias

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import TypedDict

# ---------------------------------------------------------------------------
# Type aliases
# ---------------------------------------------------------------------------

ScaleFamily: TypeAlias = Literal[
    "integer_lattice",
    "h_lattice",
    "q_lattice",
    "sampled_interval",
    "custom",
]

SolveMethod: TypeAlias = Literal["direct", "newton", "brute"]

Sense: TypeAlias = Literal["min", "max"]

# ---------------------------------------------------------------------------
# Time scales and grid functions
# ---------------------------------------------------------------------------


class TimeScale(BaseModel):
    """Finite, strictly increasing point set with its family tag."""

    model_config = ConfigDict(frozen=True)

    points: tuple[float, ...] = Field(
        description="Strictly increasing points t_0 < ... < t_N, N >= 1."
    )
    family: ScaleFamily = Field(default="custom")
    param: float | None = Field(
        default=None,
        description="h for h_lattice/sampled_interval, q for q_lattice.",
    )

    @field_validator("points", mode="before")
    @classmethod
    def _coerce_points(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(float(v) for v in value)
        return value

    @field_validator("points")
    @classmethod
    def _check_points(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if len(value) < 2:
            raise ValueError("a time scale needs at least two points")
        if not all(math.isfinite(v) for v in value):
            raise ValueError("time scale points must be finite")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("time scale points must be strictly increasing")
        return value

    @property
    def n(self) -> int:
        """Index of the last point (the scale has n + 1 points)."""
        return len(self.points) - 1

    @property
    def span(self) -> float:
        """Distance between the first and last point."""
        return self.points[-1] - self.points[0]

    @cached_property
    def array(self) -> np.ndarray:
        """Points as a read-only float array."""
        arr = np.asarray(self.points, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def graininess(self) -> np.ndarray:
        """nu(t_j) = t_j - t_{j-1}, with nu(t_0) = 0."""
        nu = np.concatenate(([0.0], np.diff(self.array)))
        nu.setflags(write=False)
        return nu


class HCoefficients(BaseModel):
    """Affine law rho(t) = a1*t + a0 of condition (H)."""

    model_config = ConfigDict(frozen=True)

    a1: float = Field(gt=0, description="Slope of the backward jump.")
    a0: float = Field(description="Offset of the backward jump.")
    exact: bool = Field(description="True when taken from the family tag, not fitted.")
    vacuous: bool = Field(
        default=False,
        description="True for r = 1, where (H) imposes nothing.",
    )
    residual: float = Field(
        default=0.0,
        description="max |rho(t) - a1*t - a0| over the kappa-set.",
    )


class GridFunction(BaseModel):
    """Real values on the contiguous index range [start, stop] of a scale."""

    model_config = ConfigDict(frozen=True)

    scale: TimeScale
    start: int = Field(ge=0)
    values: tuple[float, ...]

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(float(v) for v in value.ravel())
        return value

    @model_validator(mode="after")
    def _check_domain(self) -> GridFunction:
        if self.stop > self.scale.n:
            raise ValueError(
                f"domain [{self.start}, {self.stop}] exceeds the scale (N={self.scale.n})"
            )
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("grid function values must be finite")
        return self

    @classmethod
    def on(cls, scale: TimeScale, values: Any, start: int = 0) -> GridFunction:
        """Attach values to consecutive scale points beginning at `start`."""
        return cls(scale=scale, start=start, values=np.asarray(values, dtype=float))

    @property
    def stop(self) -> int:
        """Index of the last point in the domain (inclusive)."""
        return self.start + len(self.values) - 1

    @property
    def size(self) -> int:
        """Number of points in the domain."""
        return len(self.values)

    @cached_property
    def array(self) -> np.ndarray:
        """Values as a read-only float array."""
        arr = np.asarray(self.values, dtype=float)
        arr.setflags(write=False)
        return arr

    @property
    def points(self) -> np.ndarray:
        """Scale points of the domain."""
        return self.scale.array[self.start : self.stop + 1]

    def sup_norm(self) -> float:
        """Return max |f| over the domain (0 for an empty domain)."""
        return float(np.max(np.abs(self.array))) if self.values else 0.0


# ---------------------------------------------------------------------------
# Variational reports
# ---------------------------------------------------------------------------


class BoundaryConditions(BaseModel):
    """Boundary rows of problem (P): r values at sigma^{r-1}(a) and r at b."""

    model_config = ConfigDict(frozen=True)

    alphas: tuple[float, ...] = Field(description="y^{nabla^i}(sigma^{r-1}(a)) = alpha_i.")
    betas: tuple[float, ...] = Field(description="y^{nabla^i}(b) = beta_i.")

    @model_validator(mode="after")
    def _same_length(self) -> BoundaryConditions:
        if len(self.alphas) != len(self.betas) or not self.alphas:
            raise ValueError("alphas and betas need the same positive length r")
        return self

    @property
    def order(self) -> int:
        """Number of rows per side."""
        return len(self.alphas)


class ELReport(BaseModel):
    """Euler-Lagrange residual on [a,b]_{kappa^{2r}} with per-term diagnostics."""

    model_config = ConfigDict(frozen=True)

    residual: GridFunction
    sup_norm: float
    terms: tuple[GridFunction, ...] = Field(
        description="(-1)^i (1/a1)^{i(i-1)/2} L_{u_i}^{nabla^i}, i = 0..r."
    )
    coefficients: tuple[float, ...]
    a1: float
    exchange_factors: tuple[float, ...] = Field(
        description="a1^{i(r-i)}, the factor converting y^{rho^{r-i} nabla^i} "
        "into y^{nabla^i rho^{r-i}}."
    )


class Solution(BaseModel):
    """Extremal candidate returned by a solver."""

    model_config = ConfigDict(frozen=True)

    y: GridFunction
    objective: float
    el_sup_norm: float
    method: SolveMethod
    iterations: int
    converged: bool
    objective_history: tuple[float, ...] = ()
    lattice_bound: float | None = Field(
        default=None,
        description="Brute force only: lattice resolution times the l1 norm of the gradient at "
        "the lattice optimum. A first-order estimate of how far the continuous optimum "
        "can undercut it, not a certified bound.",
    )
    message: str = ""


class TrialReport(BaseModel):
    """Outcome of one randomized or exhaustive property check."""

    name: str
    trials: int = 0
    failures: int = 0
    worst_defect: float = 0.0
    tolerance: float = 0.0
    seeds: list[int] = Field(
        default_factory=list,
        description="Seeds of the failing trials.",
    )

    @property
    def passed(self) -> bool:
        """True when no trial failed."""
        return self.failures == 0


# ---------------------------------------------------------------------------
# JSON input schemas
# ---------------------------------------------------------------------------


class ScaleSpec(BaseModel):
    """JSON description of a time scale: a family over [a, b] or explicit points."""

    model_config = ConfigDict(extra="forbid")

    family: ScaleFamily | None = None
    params: dict[str, float] = Field(default_factory=dict)
    a: float | None = None
    b: float | None = None
    points: list[float] | None = None

    @model_validator(mode="after")
    def _one_form(self) -> ScaleSpec:
        if self.points is not None:
            if self.family not in (None, "custom"):
                raise ValueError("explicit points describe a custom scale")
            return self
        if self.family is None or self.a is None or self.b is None:
            raise ValueError("give either 'points' or 'family' with 'a' and 'b'")
        return self


class ProblemSpec(BaseModel):
    """JSON description of a variational problem."""

    model_config = ConfigDict(extra="forbid")

    scale: ScaleSpec
    order: int = Field(ge=1)
    lagrangian: str
    alphas: list[float]
    betas: list[float]

    @model_validator(mode="after")
    def _rows_match_order(self) -> ProblemSpec:
        if len(self.alphas) != self.order or len(self.betas) != self.order:
            raise ValueError("alphas and betas must each hold exactly `order` values")
        return self


# ---------------------------------------------------------------------------
# Run configuration and JSON outputs
# ---------------------------------------------------------------------------


class RunConfig(BaseModel):
    """Validated command-line invocation."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["scale inspect", "diff", "integrate", "solve", "check", "suite"]
    inputs: list[str] = Field(default_factory=list)
    out: str | None = None
    scale: str | None = None
    method: SolveMethod = "direct"
    sense: Sense = "min"
    seed: int = 0
    trials: int = Field(default=100, ge=1)
    order: int = Field(default=1, ge=0)
    rho: int = Field(default=0, ge=0)
    lower: float | None = None
    upper: float | None = None
    y_path: str | None = None
    tol_grad: float | None = Field(default=None, gt=0)
    tol_res: float | None = Field(default=None, gt=0)
    max_iter: int | None = Field(default=None, ge=1)
    lo: float | None = None
    hi: float | None = None
    steps: int | None = Field(default=None, ge=1)


class SolveSummary(BaseModel):
    """Summary JSON written by `nablavar solve`."""

    method: SolveMethod
    sense: Sense
    objective: float
    el_sup_norm: float
    iterations: int
    converged: bool
    lattice_bound: float | None = Field(
        default=None,
        description="Brute force only: lattice resolution times the l1 norm of the gradient at "
        "the lattice optimum. A first-order estimate of how far the continuous optimum "
        "can undercut it, not a certified bound.",
    )
    note: str = ""


class CheckOutput(BaseModel):
    """ELReport JSON written by `nablavar check`."""

    order: int
    a1: float
    coefficients: list[float]
    exchange_factors: list[float]
    sup_norm: float
    term_sup_norms: list[float]
    domain_start: int
    residual_csv: str


class SuiteOutput(BaseModel):
    """Report list written by `nablavar suite`."""

    seed: int
    trials: int
    passed: bool
    reports: list[TrialReport]


# ---------------------------------------------------------------------------
# LangGraph state
# ---------------------------------------------------------------------------


class SolveState(TypedDict, total=False):
    """Solve-pipeline state."""

    # Inputs: either `spec` (built by the prepare node) or a ready `problem`
    spec: ProblemSpec | None
    problem: Any
    method: SolveMethod
    sense: Sense
    options: dict[str, Any]

    # Outputs
    solution: Solution | None
    report: ELReport | None
    error_message: str


# Models whose JSON Schemas are exported by scripts/export_schemas.py.
SCHEMA_MODELS: dict[str, type[BaseModel]] = {
    "scale": ScaleSpec,
    "problem": ProblemSpec,
    "run_config": RunConfig,
    "solve_summary": SolveSummary,
    "check_output": CheckOutput,
    "suite_output": SuiteOutput,
    "trial_report": TrialReport,
}
