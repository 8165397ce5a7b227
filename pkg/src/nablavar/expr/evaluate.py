"""Real-valued, vectorized evaluation of expression trees."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from nablavar.errors import EvalError
from nablavar.expr.nodes import BinOp, Call, Expr, Neg, Num, Var

ArrayLike = float | np.ndarray


def evaluate(e: Expr, t: ArrayLike, u: Sequence[ArrayLike]) -> ArrayLike:
    """Evaluate e at t and u = (u0, ..., ur).

    Arguments may be floats or numpy arrays of a common shape; the result has
    the broadcast shape (a float for scalar inputs).

    Raises:
        EvalError: On log or sqrt outside their domain, division by zero,
            0 to a negative power, a negative base to a non-integer power, a
            non-finite result, or a variable u_i beyond len(u) - 1.
    """
    with np.errstate(all="ignore"):
        result = _eval(e, t, u)
    if not np.all(np.isfinite(result)):
        raise EvalError("evaluation produced a non-finite value")
    if np.ndim(result) == 0:
        return float(result)
    return result


def _any(mask: ArrayLike) -> bool:
    return bool(np.any(mask))


def _eval(e: Expr, t: ArrayLike, u: Sequence[ArrayLike]) -> ArrayLike:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.index is None:
            return t
        if e.index >= len(u):
            raise EvalError(f"{e.name} needs {e.index + 1} arguments, got {len(u)}")
        return u[e.index]
    if isinstance(e, Neg):
        return -_eval(e.operand, t, u)
    if isinstance(e, Call):
        return _call(e.func, _eval(e.arg, t, u))
    assert isinstance(e, BinOp)
    left = _eval(e.left, t, u)
    right = _eval(e.right, t, u)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        if _any(np.equal(right, 0.0)):
            raise EvalError("division by zero")
        return np.divide(left, right)
    return _power(left, right)


def _power(base: ArrayLike, exponent: ArrayLike) -> ArrayLike:
    base, exponent = np.broadcast_arrays(np.asarray(base, float), np.asarray(exponent, float))
    if _any((base == 0.0) & (exponent < 0)):
        raise EvalError("0 raised to a negative power")
    if _any((base < 0.0) & (exponent != np.round(exponent))):
        raise EvalError("negative base raised to a non-integer power")
    return np.power(base, exponent)


def _call(func: str, x: ArrayLike) -> ArrayLike:
    if func == "sin":
        return np.sin(x)
    if func == "cos":
        return np.cos(x)
    if func == "exp":
        return np.exp(x)
    if func == "log":
        if _any(np.less_equal(x, 0.0)):
            raise EvalError("log of a non-positive value")
        return np.log(x)
    if func == "sqrt":
        if _any(np.less(x, 0.0)):
            raise EvalError("sqrt of a negative value")
        return np.sqrt(x)
    if func == "abs":
        return np.abs(x)
    if func == "sign":
        return np.sign(x)
    raise EvalError(f"unknown function {func!r}")
