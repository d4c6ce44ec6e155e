"""Radial expression language with second-order forward-mode differentiation.

Warp and weight profiles are given as strings in a single variable ``r``.
The grammar supports + - * / ^ (constant exponent only), unary minus, the
functions sin, cos, sinh, cosh, exp, log, sqrt, tanh, and the constant pi.
Evaluation returns a :class:`Jet2` carrying (value, d/dr, d2/dr2), which is
everything downstream curvature formulas consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Jet2",
    "Expr",
    "ExprSyntaxError",
    "ExprDomainError",
    "parse",
    "eval_jet2",
    "to_string",
]

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "sqrt", "tanh")
CONSTANTS = {"pi": math.pi}


class ExprSyntaxError(ValueError):
    """Raised on malformed input; carries the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprDomainError(ArithmeticError):
    """Raised when evaluation leaves the real domain (log(0), 1/0, overflow)."""


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value and first two r-derivatives of a scalar quantity."""

    value: float
    d1: float
    d2: float

    def __add__(self, other):
        return Jet2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other):
        return Jet2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self):
        return Jet2(-self.value, -self.d1, -self.d2)

    def __mul__(self, other):
        return Jet2(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )

    def __truediv__(self, other):
        if other.value == 0.0:
            raise ExprDomainError("division by zero")
        w = self.value / other.value
        w1 = (self.d1 - w * other.d1) / other.value
        w2 = (self.d2 - 2.0 * w1 * other.d1 - w * other.d2) / other.value
        return Jet2(w, w1, w2)


def _jet_const(c):
    return Jet2(float(c), 0.0, 0.0)


def _jet_pow(u, c):
    """u^c for a constant exponent c, integer exponents exact on u <= 0."""
    is_int = float(c).is_integer()
    k = int(c) if is_int else None
    if u.value == 0.0:
        if is_int and k >= 0:
            if k == 0:
                return _jet_const(1.0)
            if k == 1:
                return u
            if k == 2:
                return Jet2(0.0, 0.0, 2.0 * u.d1 * u.d1)
            return Jet2(0.0, 0.0, 0.0)
        raise ExprDomainError(f"0 raised to exponent {c}")
    if u.value < 0.0 and not is_int:
        raise ExprDomainError(f"negative base {u.value!r} with non-integer exponent {c}")
    if is_int:
        v = u.value**k
        dv = k * u.value ** (k - 1)
        d2v = k * (k - 1) * u.value ** (k - 2) if k != 1 else 0.0
    else:
        v = u.value**c
        dv = c * u.value ** (c - 1.0)
        d2v = c * (c - 1.0) * u.value ** (c - 2.0)
    return Jet2(v, dv * u.d1, d2v * u.d1 * u.d1 + dv * u.d2)


def _jet_func(name, u):
    x = u.value
    try:
        if name == "sin":
            v, dv, d2v = math.sin(x), math.cos(x), -math.sin(x)
        elif name == "cos":
            v, dv, d2v = math.cos(x), -math.sin(x), -math.cos(x)
        elif name == "sinh":
            v, dv, d2v = math.sinh(x), math.cosh(x), math.sinh(x)
        elif name == "cosh":
            v, dv, d2v = math.cosh(x), math.sinh(x), math.cosh(x)
        elif name == "exp":
            v = math.exp(x)
            dv = d2v = v
        elif name == "log":
            if x <= 0.0:
                raise ExprDomainError(f"log of non-positive value {x!r}")
            v, dv, d2v = math.log(x), 1.0 / x, -1.0 / (x * x)
        elif name == "sqrt":
            if x < 0.0:
                raise ExprDomainError(f"sqrt of negative value {x!r}")
            if x == 0.0:
                if u.d1 == 0.0 and u.d2 == 0.0:
                    return Jet2(0.0, 0.0, 0.0)
                raise ExprDomainError("sqrt not differentiable at 0")
            v = math.sqrt(x)
            dv = 0.5 / v
            d2v = -0.25 / (v * x)
        elif name == "tanh":
            v = math.tanh(x)
            s = 1.0 - v * v
            dv = s
            d2v = -2.0 * v * s
        else:  # pragma: no cover - parser only emits known names
            raise ExprDomainError(f"unknown function {name!r}")
    except OverflowError as exc:
        raise ExprDomainError(f"{name}({x!r}) overflows") from exc
    return Jet2(v, dv * u.d1, d2v * u.d1 * u.d1 + dv * u.d2)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Expr:
    """Base class for parsed expression nodes. Immutable after parse."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * /
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_OPS = "+-*/^()"


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            try:
                value = float(text[i:j])
            except ValueError:
                raise ExprSyntaxError(f"bad number literal {text[i:j]!r}", i) from None
            tokens.append(("num", value, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent with precedence ^ > unary minus > * / > + -."""

    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self):
        node = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return node

    def sum(self):
        node = self.term()
        while self.peek()[0] in "+-":
            op = self.next()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in "*/":
            op = self.next()[0]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "-":
            offset = self.next()[2]
            child = self.unary()
            del offset
            return Neg(child)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.next()
            exponent = self.exponent()
            return Pow(base, exponent)
        return base

    def exponent(self):
        """Exponent of ^: a numeric constant, optionally signed or in parens."""
        tok = self.peek()
        if tok[0] == "-":
            self.next()
            return -self.exponent()
        if tok[0] == "(":
            self.next()
            value = self.exponent()
            self.expect(")")
            return value
        if tok[0] == "num":
            self.next()
            return tok[1]
        raise ExprSyntaxError("exponent must be a numeric constant", tok[2])

    def atom(self):
        tok = self.next()
        kind, value, offset = tok
        if kind == "num":
            return Num(value)
        if kind == "(":
            node = self.sum()
            self.expect(")")
            return node
        if kind == "name":
            if value == "r":
                return Var()
            if value in CONSTANTS:
                return Num(CONSTANTS[value])
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.sum()
                self.expect(")")
                return Func(value, arg)
            raise ExprSyntaxError(f"unknown identifier {value!r}", offset)
        raise ExprSyntaxError(f"unexpected token {value!r}", offset)


def parse(text):
    """Parse an expression string into an immutable tree.

    Raises :class:`ExprSyntaxError` with a byte offset on malformed input.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Evaluation and printing
# ---------------------------------------------------------------------------


def eval_jet2(node, r):
    """Evaluate ``node`` at radius ``r``, propagating first and second derivatives."""
    result = _eval(node, Jet2(float(r), 1.0, 0.0))
    if not (math.isfinite(result.value) and math.isfinite(result.d1) and math.isfinite(result.d2)):
        raise ExprDomainError(f"non-finite jet {result} at r={r!r}")
    return result


def _eval(node, rjet):
    if isinstance(node, Num):
        return _jet_const(node.value)
    if isinstance(node, Var):
        return rjet
    if isinstance(node, Neg):
        return -_eval(node.child, rjet)
    if isinstance(node, BinOp):
        a = _eval(node.lhs, rjet)
        b = _eval(node.rhs, rjet)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        return _jet_pow(_eval(node.base, rjet), node.exponent)
    if isinstance(node, Func):
        return _jet_func(node.name, _eval(node.arg, rjet))
    raise TypeError(f"not an Expr node: {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_string(node):
    """Render a tree so that parse(to_string(parse(s))) == parse(s)."""
    return _print(node, 0)


def _print(node, parent_prec):
    if isinstance(node, Num):
        text = repr(node.value)
        return f"({text})" if node.value < 0 and parent_prec > 0 else text
    if isinstance(node, Var):
        return "r"
    if isinstance(node, Neg):
        inner = _print(node.child, _PREC["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] else text
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        lhs = _print(node.lhs, prec - 1)
        # left associative: right operand binds one level tighter
        rhs = _print(node.rhs, prec)
        text = f"{lhs} {node.op} {rhs}"
        return f"({text})" if parent_prec >= prec else text
    if isinstance(node, Pow):
        # base one level above ^ so nested powers come back parenthesized
        base = _print(node.base, _PREC["^"] + 1)
        exp = repr(node.exponent)
        if node.exponent < 0:
            exp = f"({exp})"
        text = f"{base}^{exp}"
        return f"({text})" if parent_prec > _PREC["^"] else text
    if isinstance(node, Func):
        return f"{node.name}({_print(node.arg, 0)})"
    raise TypeError(f"not an Expr node: {node!r}")
