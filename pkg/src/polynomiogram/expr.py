"""Complex-valued coefficient formulas in the latent variables t1 and t2.

The concrete syntax is a small arithmetic language::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Identifiers are case-sensitive and limited to the variables ``t1``/``t2``,
the constants ``i``/``pi``/``e`` and the functions ``exp``, ``log``,
``sin``, ``cos``, ``sqrt``.  There is no implicit multiplication: ``2t1``
is a parse error, write ``2*t1``.

Parsed trees are immutable and safe to share across workers.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "CoefficientExpr",
    "Num",
    "Const",
    "Var",
    "Neg",
    "Bin",
    "Call",
    "ParseError",
    "EvalError",
    "parse",
    "evaluate",
    "serialize",
]

CONSTANTS = {"i": 1j, "pi": complex(math.pi), "e": complex(math.e)}
VARIABLES = ("t1", "t2")
FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class ParseError(ValueError):
    """Syntax error with a 0-based character offset into the source."""

    def __init__(self, position: int, message: str):
        super().__init__(f"parse error at offset {position}: {message}")
        self.position = position
        self.message = message


class EvalError(ArithmeticError):
    """Raised for division by exact zero, log(0) and similar."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "CoefficientExpr"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "CoefficientExpr"
    right: "CoefficientExpr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "CoefficientExpr"


CoefficientExpr = Union[Num, Const, Var, Neg, Bin, Call]


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == m.start():
            # skip pure whitespace tail
            if source[pos:].strip() == "":
                break
            bad = pos + len(source[pos:]) - len(source[pos:].lstrip())
            raise ParseError(bad, f"unexpected character {source[bad]!r}")
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(pos, f"expected {op!r}")
        return self.advance()

    def parse_expr(self) -> CoefficientExpr:
        node = self.parse_term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Bin(text, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> CoefficientExpr:
        node = self.parse_unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Bin(text, node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> CoefficientExpr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> CoefficientExpr:
        base = self.parse_atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Bin("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> CoefficientExpr:
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text in VARIABLES:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ParseError(pos, f"unknown identifier {text!r}")
        if kind == "op" and text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(pos, "expected a value")


def parse(source: str) -> CoefficientExpr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ParseError` (with character offset) for empty input,
    unknown identifiers, unbalanced parentheses and dangling operators.
    """
    if not source or source.strip() == "":
        raise ParseError(0, "empty expression")
    p = _Parser(source)
    node = p.parse_expr()
    kind, text, pos = p.peek()
    if kind != "eof":
        raise ParseError(pos, f"unexpected trailing input {text!r}")
    return node


def _int_pow(base: complex, k: int) -> complex:
    # repeated squaring; avoids principal-branch surprises for integer k
    if k == 0:
        return complex(1.0)
    if k < 0:
        if base == 0:
            raise EvalError("0 raised to a negative power")
        return 1.0 / _int_pow(base, -k)
    acc = complex(1.0)
    while k:
        if k & 1:
            acc *= base
        base *= base
        k >>= 1
    return acc


def evaluate(expr: CoefficientExpr, t1: complex, t2: complex) -> complex:
    """Evaluate ``expr`` at the latent pair (t1, t2).

    Powers with integer exponents of magnitude <= 64 use repeated
    squaring; everything else uses the principal branch exp(w*log z).
    """
    if isinstance(expr, Num):
        return complex(expr.value)
    if isinstance(expr, Const):
        return CONSTANTS[expr.name]
    if isinstance(expr, Var):
        return complex(t1) if expr.name == "t1" else complex(t2)
    if isinstance(expr, Neg):
        v = -evaluate(expr.arg, t1, t2)
        if v.imag == 0.0:
            # drop the -0.0 imaginary part negation produces for reals, so
            # negative reals sit on the principal side of the branch cuts
            v = complex(v.real, 0.0)
        return v
    if isinstance(expr, Call):
        arg = evaluate(expr.arg, t1, t2)
        try:
            if expr.fn == "exp":
                return cmath.exp(arg)
            if expr.fn == "log":
                if arg == 0:
                    raise EvalError("log(0)")
                return cmath.log(arg)
            if expr.fn == "sin":
                return cmath.sin(arg)
            if expr.fn == "cos":
                return cmath.cos(arg)
            return cmath.sqrt(arg)
        except OverflowError:
            raise EvalError(f"overflow in {expr.fn}")
    # binary
    a = evaluate(expr.left, t1, t2)
    b = evaluate(expr.right, t1, t2)
    op = expr.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise EvalError("division by zero")
        return a / b
    # power
    try:
        if b.imag == 0.0 and b.real == int(b.real) and abs(b.real) <= 64:
            return _int_pow(a, int(b.real))
        if a == 0:
            raise EvalError("0 raised to a non-integer power")
        return cmath.exp(b * cmath.log(a))
    except OverflowError:
        raise EvalError("overflow in power")


# precedence levels used by the printer; mirrors the grammar
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: CoefficientExpr) -> int:
    if isinstance(node, Bin):
        if node.op in "+-":
            return _PREC_ADD
        if node.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def serialize(expr: CoefficientExpr) -> str:
    """Render ``expr`` in the concrete syntax; parse(serialize(e)) is
    structurally identical to ``e``."""
    if isinstance(expr, Num):
        return repr(expr.value)
    if isinstance(expr, (Const, Var)):
        return expr.name
    if isinstance(expr, Call):
        return f"{expr.fn}({serialize(expr.arg)})"
    if isinstance(expr, Neg):
        inner = serialize(expr.arg)
        if _prec(expr.arg) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    left, right = serialize(expr.left), serialize(expr.right)
    if expr.op in "+-":
        if _prec(expr.right) <= _PREC_ADD:
            right = f"({right})"
        return f"{left}{expr.op}{right}"
    if expr.op in "*/":
        if _prec(expr.left) < _PREC_MUL:
            left = f"({left})"
        if _prec(expr.right) <= _PREC_MUL:
            right = f"({right})"
        return f"{left}{expr.op}{right}"
    # power: left operand must be an atom, right may be unary/power
    if _prec(expr.left) < _PREC_ATOM:
        left = f"({left})"
    if _prec(expr.right) < _PREC_NEG:
        right = f"({right})"
    return f"{left}^{right}"
