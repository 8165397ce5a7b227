"""Expression language for Lagrangians: parse, print, evaluate, differentiate."""

from nablavar.expr.derivative import partial
from nablavar.expr.evaluate import evaluate
from nablavar.expr.lagrangian import (
    Lagrangian,
    lagrangian_from_callable,
    lagrangian_from_expression,
    partials_defect,
)
from nablavar.expr.nodes import BinOp, Call, Expr, Neg, Num, Var, to_source, variables
from nablavar.expr.parser import parse, tokenize

__all__ = [
    "BinOp",
    "Call",
    "Expr",
    "Lagrangian",
    "Neg",
    "Num",
    "Var",
    "evaluate",
    "lagrangian_from_callable",
    "lagrangian_from_expression",
    "parse",
    "partial",
    "partials_defect",
    "to_source",
    "tokenize",
    "variables",
]
