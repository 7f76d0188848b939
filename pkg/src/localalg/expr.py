"""Smooth scalar expressions in m real variables.

Recursive-descent parser, exact symbolic partial derivatives and plain real
evaluation for a small expression language:

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' uint)?
    atom   := number | 'x'uint | func '(' expr ')' | '(' expr ')'
    func   := sin | cos | exp | log

Only integer powers are supported so that lifted evaluation stays exact.
No simplification is performed beyond constant folding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownVariable


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr


FUNCTIONS = {"sin": Sin, "cos": Cos, "exp": Exp, "log": Log}

# ten stock expressions in x1, x2 used by the lift equivalence suite
CORPUS_VARS = 2
CORPUS = (
    "x1^2",
    "sin(x1)",
    "exp(x1) * sin(x2)",
    "x1 * x2",
    "1 / (2 + x1)",
    "log(3 + x1)",
    "x1^3 - 2*x1*x2 + x2^2",
    "cos(x1 * x2)",
    "sin(x1)^2 + cos(x1)^2",
    "exp(x1 + x2) / (1 + x1^2)",
)


# -- folding constructors -------------------------------------------------------


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if isinstance(a, Const) and a.value == 0.0:
        return b
    if isinstance(b, Const) and b.value == 0.0:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if isinstance(b, Const) and b.value == 0.0:
        return a
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(a, Const):
        if a.value == 0.0:
            return Const(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Const):
        if b.value == 0.0:
            return Const(0.0)
        if b.value == 1.0:
            return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    # folding 0/x or x/0 would change domain behaviour; fold only b == 1
    if isinstance(b, Const) and b.value == 1.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    return Div(a, b)


def intpow(base: Expr, k: int) -> Expr:
    if k == 0:
        return Const(1.0)
    if k == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**k)
    return IntPow(base, k)


# -- parsing ---------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z]+\d*")


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.pos = 0

    def error(self, message: str, offset: int | None = None):
        raise ExprSyntaxError(message, self.pos if offset is None else offset)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.accept(ch):
            self.error(f"expected {ch!r}")

    def parse(self) -> Expr:
        node = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return node

    def expr(self) -> Expr:
        if self.accept("-"):
            node = sub(Const(0.0), self.term())
        else:
            node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Sub(node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Mul(node, self.factor())
            elif self.accept("/"):
                node = Div(node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        node = self.atom()
        if self.accept("^"):
            self.skip_ws()
            m = _NUMBER_RE.match(self.text, self.pos)
            if not m or not m.group().isdigit():
                self.error("exponent must be a non-negative integer")
            self.pos = m.end()
            return intpow(node, int(m.group()))
        return node

    def atom(self) -> Expr:
        self.skip_ws()
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        start = self.pos
        ch = self.text[self.pos]
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        m = _NUMBER_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Const(float(m.group()))
        m = _NAME_RE.match(self.text, self.pos)
        if m:
            name = m.group()
            self.pos = m.end()
            vm = re.fullmatch(r"x(\d+)", name)
            if vm:
                idx = int(vm.group(1))
                if not 1 <= idx <= self.nvars:
                    raise UnknownVariable(
                        f"variable x{idx} out of range 1..{self.nvars}", start
                    )
                return Var(idx)
            if name in FUNCTIONS:
                self.expect("(")
                node = self.expr()
                self.expect(")")
                return FUNCTIONS[name](node)
            self.error(f"unknown name {name!r}", start)
        self.error(f"unexpected character {ch!r}")


def parse(text: str, nvars: int) -> Expr:
    """Parse an expression over variables x1..x<nvars>."""
    return _Parser(text, nvars).parse()


# -- differentiation -------------------------------------------------------------


def diff(e: Expr, j: int) -> Expr:
    """Exact symbolic partial derivative with respect to x<j>."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0 if e.index == j else 0.0)
    if isinstance(e, Add):
        return add(diff(e.left, j), diff(e.right, j))
    if isinstance(e, Sub):
        return sub(diff(e.left, j), diff(e.right, j))
    if isinstance(e, Mul):
        return add(mul(diff(e.left, j), e.right), mul(e.left, diff(e.right, j)))
    if isinstance(e, Div):
        num = sub(mul(diff(e.left, j), e.right), mul(e.left, diff(e.right, j)))
        return div(num, intpow(e.right, 2))
    if isinstance(e, IntPow):
        if e.exponent == 0:
            return Const(0.0)
        return mul(
            mul(Const(float(e.exponent)), intpow(e.base, e.exponent - 1)),
            diff(e.base, j),
        )
    if isinstance(e, Sin):
        return mul(Cos(e.arg), diff(e.arg, j))
    if isinstance(e, Cos):
        return mul(Const(-1.0), mul(Sin(e.arg), diff(e.arg, j)))
    if isinstance(e, Exp):
        return mul(e, diff(e.arg, j))
    if isinstance(e, Log):
        return div(diff(e.arg, j), e.arg)
    raise TypeError(f"not an expression node: {e!r}")


# -- evaluation ------------------------------------------------------------------


def eval_real(e: Expr, point) -> float:
    """Evaluate at a real point (sequence of length >= max variable index)."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(point[e.index - 1])
    if isinstance(e, Add):
        return eval_real(e.left, point) + eval_real(e.right, point)
    if isinstance(e, Sub):
        return eval_real(e.left, point) - eval_real(e.right, point)
    if isinstance(e, Mul):
        return eval_real(e.left, point) * eval_real(e.right, point)
    if isinstance(e, Div):
        denom = eval_real(e.right, point)
        if denom == 0.0:
            raise DomainError("division by zero")
        return eval_real(e.left, point) / denom
    if isinstance(e, IntPow):
        return eval_real(e.base, point) ** e.exponent
    if isinstance(e, Sin):
        return math.sin(eval_real(e.arg, point))
    if isinstance(e, Cos):
        return math.cos(eval_real(e.arg, point))
    if isinstance(e, Exp):
        return math.exp(eval_real(e.arg, point))
    if isinstance(e, Log):
        v = eval_real(e.arg, point)
        if v <= 0.0:
            raise DomainError(f"log of non-positive value {v}")
        return math.log(v)
    raise TypeError(f"not an expression node: {e!r}")


def to_text(e: Expr) -> str:
    """Render an expression; fully parenthesized so parsing round-trips."""
    if isinstance(e, Const):
        return f"({e.value!r})" if e.value < 0 else repr(e.value)
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Add):
        return f"({to_text(e.left)} + {to_text(e.right)})"
    if isinstance(e, Sub):
        return f"({to_text(e.left)} - {to_text(e.right)})"
    if isinstance(e, Mul):
        return f"({to_text(e.left)} * {to_text(e.right)})"
    if isinstance(e, Div):
        return f"({to_text(e.left)} / {to_text(e.right)})"
    if isinstance(e, IntPow):
        base = to_text(e.base)
        if isinstance(e.base, IntPow):
            base = f"({base})"
        return f"{base}^{e.exponent}"
    for name, cls in FUNCTIONS.items():
        if isinstance(e, cls):
            return f"{name}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")
