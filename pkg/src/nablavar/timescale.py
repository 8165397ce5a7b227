"""Finite time scales: jump operators, graininess, kappa-sets and condition (H).

A finite time scale is a strictly increasing list of points. The backward jump
rho maps each point to its left neighbour and fixes the minimum; the forward
jump sigma maps to the right neighbour and fixes the maximum. Every point of a
finite scale is isolated, so the dense/scattered classification is trivial
except at the two endpoints.
"""

from __future__ import annotations

import logging
import math
from typing import Literal

import numpy as np

from nablavar.errors import BadParam, Degenerate, EmptyScale, HViolated, NotInScale
from nablavar.state import HCoefficients, ScaleFamily, ScaleSpec, TimeScale, TrialReport

logger = logging.getLogger(__name__)

LOOKUP_RELATIVE_TOLERANCE = 1e-12
H_RELATIVE_TOLERANCE = 1e-9

# Lattice indices are snapped with this slack so that e.g. 1.0/0.1 still
# counts 10 as inside [0, 1].
_INDEX_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def make_lattice(
    kind: ScaleFamily,
    params: dict[str, float] | None,
    a: float,
    b: float,
) -> TimeScale:
    """Intersect a named lattice with [a, b].

    Args:
        kind: Family tag: integer_lattice, h_lattice (param h), q_lattice
            (param q) or sampled_interval (param h).
        params: Family parameters, e.g. {"h": 0.5} or {"q": 2}.
        a: Left end of the window.
        b: Right end of the window.

    Returns:
        The time scale made of the lattice points in [a, b].

    Raises:
        BadParam: If a >= b, h <= 0, q <= 1 or a parameter is missing.
        EmptyScale: If fewer than two lattice points fall inside [a, b].
    """
    params = params or {}
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise BadParam(f"need finite a < b, got a={a!r}, b={b!r}")

    param: float | None = None
    if kind == "integer_lattice":
        points = _step_lattice(1.0, a, b)
    elif kind == "h_lattice":
        param = _positive(params, "h")
        points = _step_lattice(param, a, b)
    elif kind == "sampled_interval":
        h = _positive(params, "h")
        intervals = max(1, round((b - a) / h))
        points = np.linspace(a, b, intervals + 1)
        param = (b - a) / intervals
    elif kind == "q_lattice":
        q = params.get("q")
        if q is None or not q > 1:
            raise BadParam(f"q_lattice needs q > 1, got {q!r}")
        param = float(q)
        points = _geometric_lattice(param, a, b)
    else:
        raise BadParam(f"make_lattice cannot build family {kind!r}; use explicit points")

    if len(points) < 2:
        raise EmptyScale(f"{kind} on [{a}, {b}] has {len(points)} point(s); need at least 2")
    return TimeScale(points=np.asarray(points, dtype=float), family=kind, param=param)


def custom_scale(points: list[float] | np.ndarray) -> TimeScale:
    """Build a custom time scale from explicit points.

    Raises:
        EmptyScale: If fewer than two points are given.
    """
    if len(points) < 2:
        raise EmptyScale(f"a time scale needs at least 2 points, got {len(points)}")
    return TimeScale(points=np.asarray(points, dtype=float), family="custom")


def scale_from_spec(spec: ScaleSpec) -> TimeScale:
    """Build a time scale from its JSON description."""
    if spec.points is not None:
        return custom_scale(spec.points)
    assert spec.family is not None and spec.a is not None and spec.b is not None
    return make_lattice(spec.family, spec.params, spec.a, spec.b)


def _positive(params: dict[str, float], key: str) -> float:
    value = params.get(key)
    if value is None or not value > 0:
        raise BadParam(f"parameter {key!r} must be positive, got {value!r}")
    return float(value)


def _step_lattice(h: float, a: float, b: float) -> np.ndarray:
    k_min = math.ceil(a / h - _INDEX_SLACK)
    k_max = math.floor(b / h + _INDEX_SLACK)
    return np.arange(k_min, k_max + 1, dtype=float) * h


def _geometric_lattice(q: float, a: float, b: float) -> np.ndarray:
    # q^{N_0} = {1, q, q^2, ...}
    if b < 1:
        return np.empty(0)
    k_min = 0 if a <= 1 else math.ceil(math.log(a) / math.log(q) - _INDEX_SLACK)
    k_max = math.floor(math.log(b) / math.log(q) + _INDEX_SLACK)
    return np.array([q**k for k in range(k_min, k_max + 1)], dtype=float)


# ---------------------------------------------------------------------------
# Jump operators
# ---------------------------------------------------------------------------


def index_of(ts: TimeScale, t: float) -> int:
    """Return the index of point t, matching within 1e-12 * span.

    Raises:
        NotInScale: If no scale point lies within tolerance of t.
    """
    tol = LOOKUP_RELATIVE_TOLERANCE * max(ts.span, 1.0)
    j = int(np.searchsorted(ts.array, t))
    for candidate in (j - 1, j):
        if 0 <= candidate <= ts.n and abs(ts.points[candidate] - t) <= tol:
            return candidate
    raise NotInScale(f"t={t!r} is not a point of the time scale")


def rho(ts: TimeScale, t: float) -> float:
    """Backward jump: the left neighbour of t, or t itself at the minimum."""
    j = index_of(ts, t)
    return ts.points[max(j - 1, 0)]


def sigma(ts: TimeScale, t: float) -> float:
    """Forward jump: the right neighbour of t, or t itself at the maximum."""
    j = index_of(ts, t)
    return ts.points[min(j + 1, ts.n)]


def nu(ts: TimeScale, t: float) -> float:
    """Backward graininess nu(t) = t - rho(t)."""
    j = index_of(ts, t)
    return float(ts.graininess[j])


def iterate_jump(
    ts: TimeScale,
    t: float,
    n: int,
    direction: Literal["rho", "sigma"],
) -> float:
    """Apply rho or sigma n times, saturating at the endpoints.

    Raises:
        NotInScale: If t is not a point of the scale.
        BadParam: If n is negative.
    """
    if n < 0:
        raise BadParam(f"jump iterate needs n >= 0, got {n}")
    j = index_of(ts, t)
    if direction == "rho":
        return ts.points[max(j - n, 0)]
    return ts.points[min(j + n, ts.n)]


def kappa_set(ts: TimeScale, j: int) -> tuple[float, ...]:
    """Return T_{kappa^j}: the scale with its first j points removed.

    Raises:
        Degenerate: If j is negative or exceeds N.
    """
    if j < 0 or j > ts.n:
        raise Degenerate(f"kappa^{j} of a scale with N={ts.n} is empty")
    return ts.points[j:]


# ---------------------------------------------------------------------------
# Condition (H)
# ---------------------------------------------------------------------------


def family_coefficients(ts: TimeScale) -> tuple[float, float] | None:
    """Return the exact (a1, a0) a family tag implies, or None for custom scales."""
    if ts.family == "integer_lattice":
        return 1.0, -1.0
    if ts.family in ("h_lattice", "sampled_interval") and ts.param is not None:
        return 1.0, -ts.param
    if ts.family == "q_lattice" and ts.param is not None:
        return 1.0 / ts.param, 0.0
    return None


def h_coefficients(
    ts: TimeScale,
    r: int,
    *,
    tol_h: float | None = None,
) -> HCoefficients:
    """Detect condition (H): rho(t) = a1*t + a0 on T_kappa.

    For r = 1 the condition is vacuous and (a1, a0) = (1, 0) is returned.
    Family lattices use their exact coefficients; custom scales are fitted from
    the first two adjacent rho-pairs. In both cases the affine law is verified
    on every point of T_kappa.

    Args:
        ts: The time scale.
        r: Order of the variational problem.
        tol_h: Allowed defect; defaults to 1e-9 * max(1, |b|).

    Returns:
        The coefficients with the worst residual observed.

    Raises:
        BadParam: If r < 1.
        HViolated: If r > 1 and no affine law fits within tolerance.
    """
    if r < 1:
        raise BadParam(f"order r must be >= 1, got {r}")
    if r == 1:
        return HCoefficients(a1=1.0, a0=0.0, exact=True, vacuous=True)

    if tol_h is None:
        tol_h = H_RELATIVE_TOLERANCE * max(1.0, abs(ts.points[-1]))

    exact = family_coefficients(ts)
    if exact is not None:
        a1, a0 = exact
    elif ts.n == 1:
        # T_kappa is a single point: any positive slope fits.
        a1, a0 = 1.0, ts.points[0] - ts.points[1]
    else:
        t0, t1, t2 = ts.points[:3]
        a1 = (t1 - t0) / (t2 - t1)
        a0 = t0 - a1 * t1

    t = ts.array[1:]
    defects = np.abs(ts.array[:-1] - (a1 * t + a0))
    worst = int(np.argmax(defects))
    residual = float(defects[worst])
    if residual > tol_h:
        logger.info("Condition (H) fails at t=%s (defect %.3e)", t[worst], residual)
        raise HViolated(float(t[worst]), residual, tol_h)

    return HCoefficients(a1=a1, a0=a0, exact=exact is not None, residual=residual)


def satisfies_h(ts: TimeScale, r: int = 2) -> bool:
    """Return True when condition (H) holds for order r."""
    try:
        h_coefficients(ts, r)
    except HViolated:
        return False
    return True


def is_degenerate(ts: TimeScale, r: int) -> bool:
    """Return True for a scale with exactly 2r points (everything is pinned)."""
    return len(ts.points) == 2 * r


# ---------------------------------------------------------------------------
# Point classification
# ---------------------------------------------------------------------------


def audit_point_classes(ts: TimeScale) -> TrialReport:
    """Check that no point is simultaneously right-dense and left-scattered.

    On a finite scale sigma(t) = t only at the maximum, so the audit is a
    structural check over every point.
    """
    failures = 0
    for j, t in enumerate(ts.points):
        right_dense = sigma(ts, t) == t and j != ts.n
        left_scattered = rho(ts, t) < t
        if right_dense and left_scattered:
            failures += 1
    return TrialReport(
        name="point_classes",
        trials=len(ts.points),
        failures=failures,
    )
