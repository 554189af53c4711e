"""A small expression language for boundary data.

Expressions in one variable ``y`` are parsed into an immutable tree that
evaluates on numpy arrays and differentiates symbolically. Grammar (EBNF)::

    expr   = term , { ( "+" | "-" ) , term } ;
    term   = unary , { ( "*" | "/" ) , unary } ;
    unary  = ( "+" | "-" ) , unary | power ;
    power  = atom , [ "^" , unary ] ;
    atom   = number | "y" | "pi" | func , "(" , expr , ")" | "(" , expr , ")" ;
    func   = "sin" | "cos" | "exp" | "abs" ;
    number = digits , [ "." , [ digits ] ] , [ exponent ]
           | "." , digits , [ exponent ] ;
    exponent = ( "e" | "E" ) , [ "+" | "-" ] , digits ;

``^`` is right-associative and binds tighter than unary minus, so
``-y^2`` is ``-(y^2)`` and ``2^3^2`` is ``2^9``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DifferentiationUnsupported",
    "Expr",
    "ParseError",
    "parse",
]


class ParseError(ValueError):
    """Syntax error; ``column`` is 1-based."""

    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column


class DifferentiationUnsupported(ValueError):
    """The expression (or this representation) has no derivative of that order."""


# -- tree -----------------------------------------------------------------------


class Expr:
    """Base node. Subclasses are frozen dataclasses."""

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            out = np.broadcast_to(self.eval(y), y.shape).astype(float)
        return float(out) if out.ndim == 0 else out

    def derivative(self, order=1):
        node = self
        for _ in range(order):
            node = node.diff()
        return node

    # arithmetic helpers with light constant folding
    def __add__(self, other):
        return _add(self, other)

    def __sub__(self, other):
        return _sub(self, other)

    def __mul__(self, other):
        return _mul(self, other)

    def __truediv__(self, other):
        return _div(self, other)

    def __neg__(self):
        return _neg(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def eval(self, y):
        return np.full_like(y, self.value)

    def diff(self):
        return ZERO

    def __str__(self):
        return repr(self.value) if self.value >= 0 else f"({self.value!r})"


@dataclass(frozen=True)
class Pi(Expr):
    def eval(self, y):
        return np.full_like(y, math.pi)

    def diff(self):
        return ZERO

    def __str__(self):
        return "pi"


@dataclass(frozen=True)
class Var(Expr):
    def eval(self, y):
        return y

    def diff(self):
        return ONE

    def __str__(self):
        return "y"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def eval(self, y):
        return -self.arg.eval(y)

    def diff(self):
        return _neg(self.arg.diff())

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def eval(self, y):
        a = self.left.eval(y)
        b = self.right.eval(y)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            return a / b
        return np.power(a, b)

    def diff(self):
        u, v = self.left, self.right
        if self.op == "+":
            return _add(u.diff(), v.diff())
        if self.op == "-":
            return _sub(u.diff(), v.diff())
        if self.op == "*":
            return _add(_mul(u.diff(), v), _mul(u, v.diff()))
        if self.op == "/":
            return _div(_sub(_mul(u.diff(), v), _mul(u, v.diff())), _mul(v, v))
        # power
        if _is_const(v):
            return _mul(_mul(v, _pow(u, _sub(v, ONE))), u.diff())
        # u^v (v' ln u + v u'/u); requires u > 0
        return _mul(self, _add(_mul(v.diff(), Call("log", u)), _div(_mul(v, u.diff()), u)))

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr

    def eval(self, y):
        return _FUNCS[self.name](self.arg.eval(y))

    def diff(self):
        u = self.arg
        du = u.diff()
        if self.name == "sin":
            outer = Call("cos", u)
        elif self.name == "cos":
            outer = _neg(Call("sin", u))
        elif self.name == "exp":
            outer = self
        elif self.name == "log":
            outer = _div(ONE, u)
        else:
            raise DifferentiationUnsupported(f"{self.name}() is not differentiable symbolically")
        return _mul(outer, du)

    def __str__(self):
        return f"{self.name}({self.arg})"


_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs, "log": np.log}
_USER_FUNCS = ("sin", "cos", "exp", "abs")

ZERO = Num(0.0)
ONE = Num(1.0)


def _is_const(e):
    return isinstance(e, (Num, Pi)) or (isinstance(e, Neg) and _is_const(e.arg))


def _is_num(e, value):
    return isinstance(e, Num) and e.value == value


def _add(a, b):
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a, b):
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a, b):
    if _is_num(a, 0.0):
        return ZERO
    if _is_num(b, 1.0):
        return a
    return BinOp("/", a, b)


def _pow(a, b):
    if _is_num(b, 0.0):
        return ONE
    if _is_num(b, 1.0):
        return a
    return BinOp("^", a, b)


def _neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def contains_call(expr, name):
    """True if ``name(...)`` occurs anywhere in the tree."""
    if isinstance(expr, Call):
        return expr.name == name or contains_call(expr.arg, name)
    if isinstance(expr, BinOp):
        return contains_call(expr.left, name) or contains_call(expr.right, name)
    if isinstance(expr, Neg):
        return contains_call(expr.arg, name)
    return False


# -- parser ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start + 1))
        pos = m.end()
    tokens.append(("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, col = self.peek()
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", col)
        self.take()

    def parse(self):
        node = self.expr()
        kind, text, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", col)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text in ("+", "-"):
            self.take()
            arg = self.unary()
            return Neg(arg) if text == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, col = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "y":
                return Var()
            if text == "pi":
                return Pi()
            if text in _USER_FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise ParseError(f"unknown name {text!r}", col)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", col)


def parse(text):
    """Parse ``text`` into an :class:`Expr`; raises :class:`ParseError`."""
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    return _Parser(text).parse()
