"""Symbolic partial derivatives with respect to u_i.

Results are simplified only by constant folding and 0/1 absorption; no
further algebra is attempted. abs differentiates to sign, so abs'(0) = 0.
"""

from __future__ import annotations

import math

from nablavar.errors import EvalError
from nablavar.expr.evaluate import evaluate
from nablavar.expr.nodes import BinOp, Call, Expr, Neg, Num, Var

ZERO = Num(value=0.0)
ONE = Num(value=1.0)


# ---------------------------------------------------------------------------
# Simplifying constructors
# ---------------------------------------------------------------------------


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Num) and e.value == value


def _fold(e: Expr) -> Expr:
    # Constant subtrees fold only to finite literals.
    try:
        value = evaluate(e, 0.0, ())
    except EvalError:
        return e
    assert isinstance(value, float)
    return Num(value=value) if math.isfinite(value) else e


def add(x: Expr, y: Expr) -> Expr:
    """x + y."""
    if _is(x, 0.0):
        return y
    if _is(y, 0.0):
        return x
    if isinstance(x, Num) and isinstance(y, Num):
        return _fold(BinOp(op="+", left=x, right=y))
    return BinOp(op="+", left=x, right=y)


def sub(x: Expr, y: Expr) -> Expr:
    """x - y."""
    if _is(y, 0.0):
        return x
    if _is(x, 0.0):
        return neg(y)
    if isinstance(x, Num) and isinstance(y, Num):
        return _fold(BinOp(op="-", left=x, right=y))
    return BinOp(op="-", left=x, right=y)


def mul(x: Expr, y: Expr) -> Expr:
    """x * y."""
    if _is(x, 0.0) or _is(y, 0.0):
        return ZERO
    if _is(x, 1.0):
        return y
    if _is(y, 1.0):
        return x
    if isinstance(x, Num) and isinstance(y, Num):
        return _fold(BinOp(op="*", left=x, right=y))
    return BinOp(op="*", left=x, right=y)


def div(x: Expr, y: Expr) -> Expr:
    """x / y."""
    if _is(y, 1.0):
        return x
    if _is(x, 0.0) and not _is(y, 0.0):
        return ZERO
    if isinstance(x, Num) and isinstance(y, Num):
        return _fold(BinOp(op="/", left=x, right=y))
    return BinOp(op="/", left=x, right=y)


def power(x: Expr, y: Expr) -> Expr:
    """x ^ y."""
    if _is(y, 1.0):
        return x
    if _is(y, 0.0):
        return ONE
    if isinstance(x, Num) and isinstance(y, Num):
        return _fold(BinOp(op="^", left=x, right=y))
    return BinOp(op="^", left=x, right=y)


def neg(x: Expr) -> Expr:
    """-x."""
    if isinstance(x, Num):
        return Num(value=-x.value)
    if isinstance(x, Neg):
        return x.operand
    return Neg(operand=x)


def call(func: str, x: Expr) -> Expr:
    """func(x)."""
    node = Call(func=func, arg=x)  # type: ignore[arg-type]
    return _fold(node) if isinstance(x, Num) else node


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------


def partial(e: Expr, i: int) -> Expr:
    """Differentiate e with respect to u_i.

    Args:
        e: Expression tree.
        i: Variable index, 0 <= i <= r.

    Returns:
        The simplified derivative tree.
    """
    if i < 0:
        raise ValueError(f"variable index must be >= 0, got {i}")
    return _diff(e, f"u{i}")


def _diff(e: Expr, name: str) -> Expr:
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == name else ZERO
    if isinstance(e, Neg):
        return neg(_diff(e.operand, name))
    if isinstance(e, Call):
        return mul(_diff(e.arg, name), _outer_derivative(e.func, e.arg))

    assert isinstance(e, BinOp)
    a, b = e.left, e.right
    da, db = _diff(a, name), _diff(b, name)
    if e.op == "+":
        return add(da, db)
    if e.op == "-":
        return sub(da, db)
    if e.op == "*":
        return add(mul(da, b), mul(a, db))
    if e.op == "/":
        return div(sub(mul(da, b), mul(a, db)), power(b, Num(value=2.0)))
    if _is(db, 0.0):
        # Constant exponent: c * a^(c-1) * a'
        return mul(mul(b, power(a, sub(b, ONE))), da)
    # General case: a^b * (b' log(a) + b a'/a)
    return mul(e, add(mul(db, call("log", a)), div(mul(b, da), a)))


def _outer_derivative(func: str, x: Expr) -> Expr:
    if func == "sin":
        return call("cos", x)
    if func == "cos":
        return neg(call("sin", x))
    if func == "exp":
        return call("exp", x)
    if func == "log":
        return div(ONE, x)
    if func == "sqrt":
        return div(ONE, mul(Num(value=2.0), call("sqrt", x)))
    if func == "abs":
        return call("sign", x)
    # sign is piecewise constant
    return ZERO
