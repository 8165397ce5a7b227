"""Lagrangians L(t, u0, ..., ur) with their partial derivatives L_{u_i}.

A Lagrangian built from an expression carries symbolic partials. One built
from an opaque Python callable falls back to central finite differences with
step cbrt(eps) * max(1, |u_i|).
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from nablavar.errors import EvalError
from nablavar.expr.derivative import partial
from nablavar.expr.evaluate import evaluate
from nablavar.expr.nodes import Expr, Neg, to_source
from nablavar.expr.parser import parse

logger = logging.getLogger(__name__)

Evaluator = Callable[[Any, Sequence[Any]], Any]

FD_STEP = float(np.cbrt(np.finfo(float).eps))
FD_TOLERANCE = 1e-6


class Lagrangian(BaseModel):
    """Value evaluator plus one partial-derivative evaluator per u_i."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    value: Evaluator
    partials: tuple[Evaluator, ...]
    expression: Expr | None = None
    partial_expressions: tuple[Expr, ...] | None = None

    @property
    def symbolic(self) -> bool:
        """True when the partials are symbolic."""
        return self.partial_expressions is not None

    def __call__(self, t: Any, u: Sequence[Any]) -> Any:
        """Evaluate L(t, u0, ..., ur)."""
        return self.value(t, u)

    def partial(self, i: int, t: Any, u: Sequence[Any]) -> Any:
        """Evaluate L_{u_i}(t, u0, ..., ur)."""
        return self.partials[i](t, u)

    def source(self) -> str:
        """Return the expression text, or a placeholder for opaque evaluators."""
        return to_source(self.expression) if self.expression is not None else "<callable>"

    def negated(self) -> Lagrangian:
        """Return -L (turns a maximization into a minimization)."""
        if self.expression is not None:
            return lagrangian_from_expression(Neg(operand=self.expression), self.order)
        value = self.value
        partials = self.partials
        return Lagrangian(
            order=self.order,
            value=lambda t, u: -value(t, u),
            partials=tuple(_negate(p) for p in partials),
        )


def _negate(fn: Evaluator) -> Evaluator:
    return lambda t, u: -fn(t, u)


def _bind(e: Expr) -> Evaluator:
    return lambda t, u: evaluate(e, t, u)


def lagrangian_from_expression(source: str | Expr, r: int) -> Lagrangian:
    """Build a Lagrangian with symbolic partials.

    Args:
        source: Expression text (or an already parsed tree).
        r: Problem order.

    Returns:
        The Lagrangian of order r.
    """
    expr = parse(source, r) if isinstance(source, str) else source
    partial_exprs = tuple(partial(expr, i) for i in range(r + 1))
    logger.debug(
        "Lagrangian %s has partials %s",
        to_source(expr),
        [to_source(p) for p in partial_exprs],
    )
    return Lagrangian(
        order=r,
        value=_bind(expr),
        partials=tuple(_bind(p) for p in partial_exprs),
        expression=expr,
        partial_expressions=partial_exprs,
    )


def _central_difference(fn: Evaluator, i: int) -> Evaluator:
    def derivative(t: Any, u: Sequence[Any]) -> Any:
        ui = np.asarray(u[i], dtype=float)
        step = FD_STEP * np.maximum(1.0, np.abs(ui))
        plus = list(u)
        minus = list(u)
        plus[i] = ui + step
        minus[i] = ui - step
        return (np.asarray(fn(t, plus)) - np.asarray(fn(t, minus))) / (2.0 * step)

    return derivative


def lagrangian_from_callable(fn: Evaluator, r: int) -> Lagrangian:
    """Wrap an opaque vectorized evaluator fn(t, (u0, ..., ur)).

    Partials are central finite differences.
    """
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    return Lagrangian(
        order=r,
        value=fn,
        partials=tuple(_central_difference(fn, i) for i in range(r + 1)),
    )


def partials_defect(
    lagrangian: Lagrangian,
    *,
    samples: int = 100,
    seed: int = 0,
    low: float = -2.0,
    high: float = 2.0,
) -> float:
    """Compare the partials against central differences at random sample points.

    Returns:
        max |L_{u_i} - central difference| / (1 + |L|) over samples and i;
        samples where L cannot be evaluated are skipped.
    """
    rng = np.random.default_rng(seed)
    fd = [_central_difference(lagrangian.value, i) for i in range(lagrangian.order + 1)]
    worst = 0.0
    for _ in range(samples):
        t = float(rng.uniform(low, high))
        u = [float(v) for v in rng.uniform(low, high, lagrangian.order + 1)]
        try:
            value = float(lagrangian(t, u))
            for i in range(lagrangian.order + 1):
                exact = float(lagrangian.partial(i, t, u))
                approx = float(fd[i](t, u))
                worst = max(worst, abs(exact - approx) / (1.0 + abs(value)))
        except EvalError:
            continue
    return worst
