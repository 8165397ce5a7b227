"""Tokenizer and recursive-descent parser for Lagrangian expressions.

Grammar (EBNF)::

    expr    = term , { ( "+" | "-" ) , term } ;
    term    = unary , { ( "*" | "/" ) , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , unary ] ;            (* right-associative *)
    atom    = number | variable | call | "(" , expr , ")" ;
    call    = function , "(" , expr , { "," , expr } , ")" ;
    variable = "t" | "u" , digit , { digit } ;
    function = "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" | "sign" ;
    number  = digits , [ "." , [ digits ] ] , [ exponent ]
            | "." , digits , [ exponent ] ;
    exponent = ( "e" | "E" ) , [ "+" | "-" ] , digits ;

So ^ binds tighter than unary minus, which binds tighter than * and /, which
bind tighter than + and -. Error offsets are byte offsets into the UTF-8
encoded source.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from nablavar.errors import ArityError, ExpressionSyntaxError, UnknownIdentifier
from nablavar.expr.nodes import FUNCTIONS, BinOp, Call, Expr, Neg, Num, Var

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_VARIABLE_RE = re.compile(r"u(\d+)")

# Bounds both the parser recursion and the depth of the tree it returns.
MAX_DEPTH = 100


class Token(NamedTuple):
    """Lexical token with its byte offset."""

    kind: str
    text: str
    offset: int


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens, ending with an `end` token.

    Raises:
        ExpressionSyntaxError: On a character no token can start with.
    """
    tokens: list[Token] = []
    position = 0
    while position < len(source):
        match = _TOKEN_RE.match(source, position)
        if match is None:
            raise ExpressionSyntaxError(
                f"unexpected character {source[position]!r}",
                _byte_offset(source, position),
            )
        kind = match.lastgroup
        assert kind is not None
        if kind != "ws":
            tokens.append(Token(kind, match.group(), _byte_offset(source, position)))
        position = match.end()
    tokens.append(Token("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, char_index: int) -> int:
    return len(source[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, tokens: list[Token], order: int) -> None:
        self._tokens = tokens
        self._position = 0
        self._order = order
        self._nesting = 0

    @property
    def _current(self) -> Token:
        return self._tokens[self._position]

    def _advance(self) -> Token:
        token = self._current
        self._position += 1
        return token

    def _accept(self, text: str) -> bool:
        if self._current.kind == "op" and self._current.text == text:
            self._position += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        token = self._current
        if not self._accept(text):
            found = token.text or "end of input"
            raise ExpressionSyntaxError(f"expected {text!r}, found {found!r}", token.offset)
        return token

    def _deeper(self, depth: int, token: Token) -> int:
        if depth > MAX_DEPTH:
            raise ExpressionSyntaxError(
                f"expression nested deeper than {MAX_DEPTH} levels", token.offset
            )
        return depth

    def parse(self) -> Expr:
        expr, _ = self._expr()
        if self._current.kind != "end":
            raise ExpressionSyntaxError(
                f"unexpected {self._current.text!r}", self._current.offset
            )
        return expr

    # Each method returns the subtree and its depth.

    def _expr(self) -> tuple[Expr, int]:
        left, depth = self._term()
        while self._current.kind == "op" and self._current.text in "+-":
            token = self._advance()
            right, right_depth = self._term()
            depth = self._deeper(max(depth, right_depth) + 1, token)
            left = BinOp(op=token.text, left=left, right=right)  # type: ignore[arg-type]
        return left, depth

    def _term(self) -> tuple[Expr, int]:
        left, depth = self._unary()
        while self._current.kind == "op" and self._current.text in "*/":
            token = self._advance()
            right, right_depth = self._unary()
            depth = self._deeper(max(depth, right_depth) + 1, token)
            left = BinOp(op=token.text, left=left, right=right)  # type: ignore[arg-type]
        return left, depth

    def _unary(self) -> tuple[Expr, int]:
        # Every recursive path passes through here.
        token = self._current
        self._nesting = self._deeper(self._nesting + 1, token)
        try:
            if self._accept("-"):
                operand, depth = self._unary()
                return Neg(operand=operand), self._deeper(depth + 1, token)
            return self._power()
        finally:
            self._nesting -= 1

    def _power(self) -> tuple[Expr, int]:
        base, depth = self._atom()
        token = self._current
        if self._accept("^"):
            exponent, exponent_depth = self._unary()
            depth = self._deeper(max(depth, exponent_depth) + 1, token)
            return BinOp(op="^", left=base, right=exponent), depth
        return base, depth

    def _atom(self) -> tuple[Expr, int]:
        token = self._current
        if token.kind == "number":
            self._advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"number {token.text!r} overflows a double", token.offset)
            return Num(value=value), 1
        if token.kind == "name":
            self._advance()
            return self._name(token)
        if self._accept("("):
            inner = self._expr()
            self._expect(")")
            return inner
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"expected an operand, found {found!r}", token.offset)

    def _name(self, token: Token) -> tuple[Expr, int]:
        name = token.text
        if name in FUNCTIONS:
            if not self._accept("("):
                raise ExpressionSyntaxError(
                    f"function {name!r} needs a parenthesized argument",
                    self._current.offset,
                )
            args: list[tuple[Expr, int]] = []
            if not (self._current.kind == "op" and self._current.text == ")"):
                args.append(self._expr())
                while self._accept(","):
                    args.append(self._expr())
            self._expect(")")
            if len(args) != 1:
                raise ArityError(f"{name} takes 1 argument, got {len(args)}")
            arg, depth = args[0]
            return Call(func=name, arg=arg), self._deeper(depth + 1, token)  # type: ignore[arg-type]

        if self._current.kind == "op" and self._current.text == "(":
            raise UnknownIdentifier(f"unknown function {name!r}")
        if name == "t":
            return Var(name="t"), 1
        match = _VARIABLE_RE.fullmatch(name)
        if match is not None:
            index = int(match.group(1))
            if index > self._order:
                raise UnknownIdentifier(
                    f"{name} exceeds the problem order r={self._order} (allowed u0..u{self._order})"
                )
            return Var(name=f"u{index}"), 1
        raise UnknownIdentifier(f"unknown identifier {name!r}")


def parse(source: str, r: int) -> Expr:
    """Parse a Lagrangian of order r.

    Args:
        source: Expression text over t, u0..ur and the known functions.
        r: Problem order; variables u_i with i > r are rejected.

    Returns:
        The expression tree.

    Raises:
        ExpressionSyntaxError: If the text is malformed or nests deeper than
            MAX_DEPTH levels (carries a byte offset).
        UnknownIdentifier: For unknown names or u_i beyond the order.
        ArityError: For a function called with other than one argument.
    """
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    return _Parser(tokenize(source), r).parse()
