"""Nabla derivatives, rho-compositions and nabla integrals of grid functions.

Every operator shrinks the domain from the left only: a nabla derivative
drops the first point, a k-fold rho-composition drops the first k points. The
resulting index range is exact, which keeps the [a,b]_{kappa^{2r}} bookkeeping
of the Euler-Lagrange residual checkable by counting.

Division by nu(t) never needs a guard: nu vanishes only at the scale minimum,
which is never in the domain of a derivative.
"""

from __future__ import annotations

from typing import Callable, Literal

import numpy as np

from nablavar.errors import DomainTooSmall, NotInDomain
from nablavar.state import GridFunction, TimeScale
from nablavar.timescale import index_of

# ---------------------------------------------------------------------------
# Constructors and domain helpers
# ---------------------------------------------------------------------------


def from_callable(
    scale: TimeScale,
    fn: Callable[[np.ndarray], np.ndarray],
    start: int = 0,
) -> GridFunction:
    """Sample a vectorized function on scale points from `start` to the end."""
    t = scale.array[start:]
    return GridFunction.on(scale, np.broadcast_to(fn(t), t.shape), start=start)


def restrict(f: GridFunction, start: int, stop: int | None = None) -> GridFunction:
    """Restrict f to the index range [start, stop] (stop defaults to f.stop).

    Raises:
        NotInDomain: If the range is not inside f's domain.
    """
    stop = f.stop if stop is None else stop
    if start < f.start or stop > f.stop:
        raise NotInDomain(
            f"[{start}, {stop}] is not inside the domain [{f.start}, {f.stop}]"
        )
    return GridFunction.on(f.scale, f.array[start - f.start : stop - f.start + 1], start)


def common_domain(*fs: GridFunction) -> tuple[int, int]:
    """Return the index range shared by all grid functions."""
    start = max(f.start for f in fs)
    stop = min(f.stop for f in fs)
    if stop < start:
        raise NotInDomain("grid functions have disjoint domains")
    return start, stop


def linear_combination(
    coefficients: list[float],
    fs: list[GridFunction],
) -> GridFunction:
    """Return sum_k c_k f_k on the common domain."""
    start, stop = common_domain(*fs)
    total = np.zeros(stop - start + 1)
    for c, f in zip(coefficients, fs, strict=True):
        total = total + c * restrict(f, start, stop).array
    return GridFunction.on(fs[0].scale, total, start)


def product(f: GridFunction, g: GridFunction) -> GridFunction:
    """Pointwise product on the common domain."""
    start, stop = common_domain(f, g)
    values = restrict(f, start, stop).array * restrict(g, start, stop).array
    return GridFunction.on(f.scale, values, start)


# ---------------------------------------------------------------------------
# Derivatives and compositions
# ---------------------------------------------------------------------------


def nabla_derivative(f: GridFunction) -> GridFunction:
    """Return f^nabla(t) = (f(t) - f(rho(t))) / nu(t) on f's domain minus its first point.

    Raises:
        DomainTooSmall: If f has fewer than two points.
    """
    if f.size < 2:
        raise DomainTooSmall(f"nabla derivative needs 2 points, domain has {f.size}")
    nu = f.scale.graininess[f.start + 1 : f.stop + 1]
    return GridFunction.on(f.scale, np.diff(f.array) / nu, start=f.start + 1)


def nabla_derivative_n(f: GridFunction, i: int) -> GridFunction:
    """Apply the nabla derivative i times; the domain loses its first i points.

    Raises:
        DomainTooSmall: If f has fewer than i + 1 points.
    """
    if i < 0:
        raise ValueError(f"derivative order must be >= 0, got {i}")
    if f.size < i + 1:
        raise DomainTooSmall(
            f"{i}-th nabla derivative needs {i + 1} points, domain has {f.size}"
        )
    for _ in range(i):
        f = nabla_derivative(f)
    return f


def compose_rho(f: GridFunction, k: int) -> GridFunction:
    """Return g = f o rho^k on f's domain shifted up by k points.

    Raises:
        DomainTooSmall: If the shifted domain is empty.
    """
    if k < 0:
        raise ValueError(f"composition power must be >= 0, got {k}")
    if k == 0:
        return f
    if f.size <= k:
        raise DomainTooSmall(f"rho^{k} composition needs {k + 1} points, domain has {f.size}")
    return GridFunction.on(f.scale, f.array[:-k], start=f.start + k)


def mixed_operator(f: GridFunction, k: int, i: int) -> GridFunction:
    """Return f^{rho^k nabla^i}: k rho-compositions first, then i nabla derivatives.

    Raises:
        DomainTooSmall: If the domain cannot absorb k shifts and i derivatives.
    """
    if f.size < k + i + 1:
        raise DomainTooSmall(
            f"rho^{k} nabla^{i} needs {k + i + 1} points, domain has {f.size}"
        )
    return nabla_derivative_n(compose_rho(f, k), i)


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


def _integral_by_index(f: GridFunction, ia: int, ib: int) -> float:
    sign = 1.0
    if ia > ib:
        ia, ib, sign = ib, ia, -1.0
    if ia == ib:
        return 0.0
    if ia + 1 < f.start or ib > f.stop:
        raise NotInDomain(
            f"integral over ({ia}, {ib}] reads points outside the domain "
            f"[{f.start}, {f.stop}]"
        )
    nu = f.scale.graininess[ia + 1 : ib + 1]
    values = f.array[ia + 1 - f.start : ib + 1 - f.start]
    return sign * float(np.dot(nu, values))


def nabla_integral(f: GridFunction, a: float, b: float) -> float:
    """Return the nabla integral: sum over a < t <= b of nu(t) f(t).

    The integral reverses sign when a > b and vanishes when a = b. The lower
    limit may be rho of the first domain point, since only points of (a, b]
    are read.

    Raises:
        NotInScale: If a or b is not a scale point.
        NotInDomain: If a summed point lies outside f's domain.
    """
    return _integral_by_index(f, index_of(f.scale, a), index_of(f.scale, b))


def antiderivative(f: GridFunction, a: float) -> GridFunction:
    """Return F(t) = int_a^t f(tau) nabla tau for t from a to the end of f's domain."""
    ia = index_of(f.scale, a)
    if ia < f.start - 1 or ia > f.stop:
        raise NotInDomain(f"a={a!r} is outside the domain of f")
    values = [_integral_by_index(f, ia, j) for j in range(ia, f.stop + 1)]
    return GridFunction.on(f.scale, values, start=ia)


def integration_by_parts_defect(
    f: GridFunction,
    g: GridFunction,
    a: float,
    b: float,
    variant: Literal["rho", "plain"],
) -> float:
    """Return LHS - RHS of an integration-by-parts formula on [a, b].

    The two nabla forms differ in which factor carries the backward jump:

    Variant "rho": int f^rho g^nabla = [f g]_a^b - int f^nabla g.
    Variant "plain": int f g^nabla = [f g]_a^b - int f^nabla g^rho.

    Raises:
        NotInDomain: If [a, b] is not inside the shared domain of f and g.
        ValueError: If variant is neither "rho" nor "plain".
    """
    start, stop = common_domain(f, g)
    ia, ib = index_of(f.scale, a), index_of(f.scale, b)
    if not (start <= min(ia, ib) and max(ia, ib) <= stop):
        raise NotInDomain(f"[{a}, {b}] is not inside the shared domain")
    f, g = restrict(f, start, stop), restrict(g, start, stop)
    f_nabla, g_nabla = nabla_derivative(f), nabla_derivative(g)

    if variant == "rho":
        lhs = _integral_by_index(product(compose_rho(f, 1), g_nabla), ia, ib)
        rhs_integral = _integral_by_index(product(f_nabla, g), ia, ib)
    elif variant == "plain":
        lhs = _integral_by_index(product(f, g_nabla), ia, ib)
        rhs_integral = _integral_by_index(product(f_nabla, compose_rho(g, 1)), ia, ib)
    else:
        raise ValueError(f"unknown integration-by-parts variant {variant!r}")

    fg = f.array * g.array
    boundary = fg[ib - start] - fg[ia - start]
    return lhs - (boundary - rhs_integral)
