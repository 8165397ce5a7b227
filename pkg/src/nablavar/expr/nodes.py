"""Expression tree for Lagrangians L(t, u0, ..., ur) and its printer.

Nodes are frozen Pydantic models, so trees compare structurally and can be
shared freely between threads.
"""

from __future__ import annotations

from typing import Literal, TypeAlias, Union

from pydantic import BaseModel, ConfigDict, Field

FunctionName: TypeAlias = Literal["sin", "cos", "exp", "log", "sqrt", "abs", "sign"]
BinaryOperator: TypeAlias = Literal["+", "-", "*", "/", "^"]

FUNCTIONS: frozenset[str] = frozenset(
    ("sin", "cos", "exp", "log", "sqrt", "abs", "sign")
)


class Num(BaseModel):
    """Numeric literal."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(allow_inf_nan=False)


class Var(BaseModel):
    """Variable reference: `t` or `u<i>`."""

    model_config = ConfigDict(frozen=True)

    name: str

    @property
    def index(self) -> int | None:
        """Index i of u_i, or None for t."""
        return None if self.name == "t" else int(self.name[1:])


class Neg(BaseModel):
    """Unary minus."""

    model_config = ConfigDict(frozen=True)

    operand: Expr


class BinOp(BaseModel):
    """Binary operation."""

    model_config = ConfigDict(frozen=True)

    op: BinaryOperator
    left: Expr
    right: Expr


class Call(BaseModel):
    """Application of a one-argument function."""

    model_config = ConfigDict(frozen=True)

    func: FunctionName
    arg: Expr


Expr: TypeAlias = Union[Num, Var, Neg, BinOp, Call]

for _model in (Neg, BinOp, Call):
    _model.model_rebuild()


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PRECEDENCE = 3
_ATOM_PRECEDENCE = 5


def _precedence(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PRECEDENCE[e.op]
    if isinstance(e, Neg) or (isinstance(e, Num) and e.value < 0):
        return _NEG_PRECEDENCE
    return _ATOM_PRECEDENCE


def _wrap(e: Expr, minimum: int) -> str:
    text = to_source(e)
    return f"({text})" if _precedence(e) < minimum else text


def to_source(e: Expr) -> str:
    """Print an expression with the fewest parentheses the grammar needs."""
    if isinstance(e, Num):
        return repr(e.value) if e.value >= 0 else f"-{-e.value!r}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"-{_wrap(e.operand, _NEG_PRECEDENCE)}"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    if e.op in ("+", "-"):
        return f"{_wrap(e.left, 1)} {e.op} {_wrap(e.right, 2)}"
    if e.op in ("*", "/"):
        return f"{_wrap(e.left, 2)}{e.op}{_wrap(e.right, 3)}"
    # ^ is right-associative and its exponent may carry a unary minus.
    return f"{_wrap(e.left, _ATOM_PRECEDENCE)}^{_wrap(e.right, _NEG_PRECEDENCE)}"


def variables(e: Expr) -> frozenset[str]:
    """Return the names of all variables in the tree."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Call):
        return variables(e.arg)
    return variables(e.left) | variables(e.right)
