"""Small arithmetic expression language for component characteristics.

An expression is built from decimal numbers, named symbols, the binary
operators ``+ - * / ^`` (with ``^`` restricted to literal rational
exponents), ``sqrt()``, and parentheses.  ``sqrt(x)`` is normalized to
``x^(1/2)`` internally and printed back as ``sqrt(x)``.

Trees are immutable.  ``parse`` folds arithmetic on constants while
building, so a characteristic like ``dimax * dQ^2 / dQmax^2`` parsed with
the spans bound collapses to a shape the analytic machinery can read off
directly.  Printing with ``to_source`` and re-parsing reproduces the tree
node for node.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

from .errors import (
    DomainError,
    MultipleVariablesError,
    ParseError,
    UnboundSymbolError,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Expr:
    """Base node type, never instantiated directly."""

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Sub(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Mul(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Div(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


def rational_pow(base: float, exponent: Fraction) -> float | None:
    """Real-valued power, or None where the reals give up.

    ``sqrt`` goes through math.sqrt so folded constants match what
    evaluation of the unfolded tree would have produced bit for bit.
    """
    if exponent == HALF:
        if base < 0.0:
            return None
        return math.sqrt(base)
    if exponent.denominator == 1:
        n = exponent.numerator
        if base == 0.0 and n < 0:
            return None
        return float(base**n)
    if base < 0.0:
        return None
    if base == 0.0 and exponent < 0:
        return None
    return math.pow(base, float(exponent))


def _is_num(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Num) and (value is None or e.value == value)


def _fold(e: Expr) -> Expr:
    """Single-step simplification; children are assumed already folded."""
    if isinstance(e, (Num, Sym)):
        return e

    if isinstance(e, Pow):
        if e.exponent == 1:
            return e.base
        if e.exponent == 0:
            return Num(1.0)
        if isinstance(e.base, Num):
            v = rational_pow(e.base.value, e.exponent)
            if v is not None and math.isfinite(v):
                return Num(v)
        return e

    lhs, rhs = e.lhs, e.rhs  # type: ignore[attr-defined]

    if isinstance(lhs, Num) and isinstance(rhs, Num):
        a, b = lhs.value, rhs.value
        v: float | None
        if isinstance(e, Add):
            v = a + b
        elif isinstance(e, Sub):
            v = a - b
        elif isinstance(e, Mul):
            v = a * b
        else:
            v = a / b if b != 0.0 else None
        if v is not None and math.isfinite(v):
            return Num(v)
        return e

    if isinstance(e, Add):
        if _is_num(lhs, 0.0):
            return rhs
        if _is_num(rhs, 0.0):
            return lhs
    elif isinstance(e, Sub):
        if _is_num(rhs, 0.0):
            return lhs
    elif isinstance(e, Mul):
        if _is_num(lhs, 0.0) or _is_num(rhs, 0.0):
            return Num(0.0)
        if _is_num(lhs, 1.0):
            return rhs
        if _is_num(rhs, 1.0):
            return lhs
        # keep literal coefficients on the left so they stack up
        if isinstance(rhs, Num):
            return _fold(Mul(rhs, lhs))
        if isinstance(lhs, Num) and isinstance(rhs, Mul) and isinstance(rhs.lhs, Num):
            c = lhs.value * rhs.lhs.value
            if math.isfinite(c):
                return _fold(Mul(Num(c), rhs.rhs))
    elif isinstance(e, Div):
        if _is_num(rhs, 1.0):
            return lhs
    return e


def add(a: Expr, b: Expr) -> Expr:
    return _fold(Add(a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return _fold(Sub(a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return _fold(Mul(a, b))


def div(a: Expr, b: Expr) -> Expr:
    return _fold(Div(a, b))


def pow_(a: Expr, k: Fraction | int) -> Expr:
    return _fold(Pow(a, Fraction(k)))


def sqrt(a: Expr) -> Expr:
    return _fold(Pow(a, HALF))


# ---------------------------------------------------------------- parsing

class _Token(NamedTuple):
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            at = pos + len(source[pos:]) - len(source[pos:].lstrip())
            if at >= len(source):
                break
            raise ParseError(f"unexpected character {source[at]!r}", at)
        kind = str(m.lastgroup)
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], constants: Mapping[str, float]):
        self.tokens = tokens
        self.i = 0
        self.constants = constants

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"unexpected {what}", tok.pos, expected)

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise self.fail(f"'{op}'")
        self.next()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            rhs = self.unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.next()
            return mul(Num(-1.0), self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            node = pow_(node, self.exponent())
        return node

    def _fraction(self, tok: _Token) -> Fraction:
        try:
            return Fraction(tok.text)
        except ValueError:
            raise ParseError(f"bad exponent literal {tok.text!r}", tok.pos) from None

    def exponent(self) -> Fraction:
        tok = self.peek()
        if tok.kind == "number":
            self.next()
            return self._fraction(tok)
        if tok.kind == "op" and tok.text == "-":
            self.next()
            num = self.peek()
            if num.kind != "number":
                raise self.fail("a number")
            self.next()
            return -self._fraction(num)
        if tok.kind == "op" and tok.text == "(":
            self.next()
            sign = 1
            if self.peek().kind == "op" and self.peek().text == "-":
                self.next()
                sign = -1
            num = self.peek()
            if num.kind != "number":
                raise self.fail("a number")
            self.next()
            value = self._fraction(num)
            if self.peek().kind == "op" and self.peek().text == "/":
                self.next()
                den = self.peek()
                if den.kind != "number":
                    raise self.fail("a number")
                self.next()
                if self._fraction(den) == 0:
                    raise ParseError("zero denominator in exponent", den.pos)
                value = value / self._fraction(den)
            self.expect_op(")")
            return sign * value
        raise self.fail("an exponent")

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.next()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.next()
            if self.peek().kind == "op" and self.peek().text == "(":
                if tok.text != "sqrt":
                    raise ParseError(f"unknown function {tok.text!r}", tok.pos)
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return sqrt(arg)
            if tok.text in self.constants:
                return Num(float(self.constants[tok.text]))
            return Sym(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.next()
            node = self.expr()
            self.expect_op(")")
            return node
        raise self.fail("a number, name, or '('")


def parse(source: str, constants: Mapping[str, float] | None = None) -> Expr:
    """Parse DSL source into an expression tree.

    Names found in ``constants`` are replaced by their values on the spot,
    which lets the folder collapse everything around them.  At most one
    free symbol may remain.
    """
    parser = _Parser(_tokenize(source), constants or {})
    node = parser.expr()
    if parser.peek().kind != "end":
        raise parser.fail("end of input")
    variables, _ = classify_names(free_symbols(node))
    if len(variables) > 1:
        raise MultipleVariablesError(variables)
    return node


CONSTANT_SUFFIXES = ("maxstar", "max")


def constant_stem(name: str) -> tuple[str, str] | None:
    """Split a span-constant name into (stem, suffix), or None.

    Span constants are named by convention: the variable they anchor plus
    ``max`` (input span) or ``maxstar`` (display span), e.g. ``dQmax``.
    """
    for suffix in CONSTANT_SUFFIXES:
        if name.endswith(suffix) and len(name) > len(suffix):
            return name[: -len(suffix)], suffix
    return None


def is_constant_name(name: str) -> bool:
    return constant_stem(name) is not None


def classify_names(names) -> tuple[frozenset[str], frozenset[str]]:
    """Split symbol names into (variables, span constants)."""
    constants = frozenset(n for n in names if is_constant_name(n))
    return frozenset(names) - constants, constants


def symbol_names(source: str) -> frozenset[str]:
    """Every symbol name appearing in source, function names excluded.

    A light scan used to discover which span constants an expression
    mentions before the binding environment exists.
    """
    tokens = _tokenize(source)
    found = set()
    for tok, nxt in zip(tokens, tokens[1:]):
        if tok.kind == "name" and not (nxt.kind == "op" and nxt.text == "("):
            found.add(tok.text)
    return frozenset(found)


# ------------------------------------------------------------- printing

def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Pow):
        return 4 if e.exponent == HALF else 3
    if isinstance(e, Num):
        return 4 if e.value >= 0 else 2
    return 4


def _exponent_source(k: Fraction) -> str:
    if k.denominator == 1:
        if k >= 0:
            return str(k.numerator)
        return f"({k.numerator})"
    return f"({k.numerator}/{k.denominator})"


def to_source(e: Expr, fmt: Callable[[float], str] = repr) -> str:
    """Render canonical source text; ``parse`` reads it back unchanged.

    ``fmt`` formats number literals.  The default keeps full precision;
    pass something like ``lambda v: format(v, '.12g')`` for display.
    """

    def wrap(node: Expr, floor: int) -> str:
        s = render(node)
        return f"({s})" if _prec(node) < floor else s

    def render(node: Expr) -> str:
        if isinstance(node, Num):
            return fmt(node.value)
        if isinstance(node, Sym):
            return node.name
        if isinstance(node, Add):
            return f"{wrap(node.lhs, 1)} + {wrap(node.rhs, 2)}"
        if isinstance(node, Sub):
            return f"{wrap(node.lhs, 1)} - {wrap(node.rhs, 2)}"
        if isinstance(node, Mul):
            return f"{wrap(node.lhs, 2)} * {wrap(node.rhs, 3)}"
        if isinstance(node, Div):
            return f"{wrap(node.lhs, 2)} / {wrap(node.rhs, 3)}"
        if isinstance(node, Pow):
            if node.exponent == HALF:
                return f"sqrt({render(node.base)})"
            return f"{wrap(node.base, 4)}^{_exponent_source(node.exponent)}"
        raise TypeError(f"not an expression node: {node!r}")

    return render(e)


# ------------------------------------------------------------ evaluation

def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundSymbolError(e.name) from None
    if isinstance(e, Pow):
        base = evaluate(e.base, env)
        v = rational_pow(base, e.exponent)
        if v is None:
            raise DomainError(
                f"{to_source(e)} is undefined at {to_source(e.base)} = {base!r}"
            )
        return v
    lhs = evaluate(e.lhs, env)  # type: ignore[attr-defined]
    rhs = evaluate(e.rhs, env)  # type: ignore[attr-defined]
    if isinstance(e, Add):
        return lhs + rhs
    if isinstance(e, Sub):
        return lhs - rhs
    if isinstance(e, Mul):
        return lhs * rhs
    if isinstance(e, Div):
        if rhs == 0.0:
            raise DomainError(f"division by zero in {to_source(e)}")
        return lhs / rhs
    raise TypeError(f"not an expression node: {e!r}")


# ----------------------------------------------------------- structure

def free_symbols(e: Expr) -> frozenset[str]:
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Sym):
        return frozenset((e.name,))
    if isinstance(e, Pow):
        return free_symbols(e.base)
    return free_symbols(e.lhs) | free_symbols(e.rhs)  # type: ignore[attr-defined]


def substitute(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Num):
        return e
    if isinstance(e, Sym):
        return bindings.get(e.name, e)
    if isinstance(e, Pow):
        return pow_(substitute(e.base, bindings), e.exponent)
    lhs = substitute(e.lhs, bindings)  # type: ignore[attr-defined]
    rhs = substitute(e.rhs, bindings)  # type: ignore[attr-defined]
    if isinstance(e, Add):
        return add(lhs, rhs)
    if isinstance(e, Sub):
        return sub(lhs, rhs)
    if isinstance(e, Mul):
        return mul(lhs, rhs)
    return div(lhs, rhs)


def differentiate(e: Expr, var: str) -> Expr:
    """Derivative with respect to ``var``, folded as it is built."""
    if isinstance(e, Num):
        return Num(0.0)
    if isinstance(e, Sym):
        return Num(1.0 if e.name == var else 0.0)
    if isinstance(e, Add):
        return add(differentiate(e.lhs, var), differentiate(e.rhs, var))
    if isinstance(e, Sub):
        return sub(differentiate(e.lhs, var), differentiate(e.rhs, var))
    if isinstance(e, Mul):
        da = differentiate(e.lhs, var)
        db = differentiate(e.rhs, var)
        return add(mul(da, e.rhs), mul(e.lhs, db))
    if isinstance(e, Div):
        da = differentiate(e.lhs, var)
        db = differentiate(e.rhs, var)
        num = sub(mul(da, e.rhs), mul(e.lhs, db))
        return div(num, pow_(e.rhs, 2))
    if isinstance(e, Pow):
        k = e.exponent
        db = differentiate(e.base, var)
        return mul(mul(Num(float(k)), pow_(e.base, k - 1)), db)
    raise TypeError(f"not an expression node: {e!r}")


def as_monomial(e: Expr, var: str) -> tuple[float, Fraction] | None:
    """Read ``e`` as ``a * var^k`` if it has that shape, else None.

    Power-of-power collapsing assumes the variable ranges over
    nonnegative values, which holds for every span-anchored delta.
    """
    if isinstance(e, Num):
        return (e.value, Fraction(0))
    if isinstance(e, Sym):
        return (1.0, Fraction(1)) if e.name == var else None
    if isinstance(e, Pow):
        inner = as_monomial(e.base, var)
        if inner is None:
            return None
        a, k = inner
        coeff = rational_pow(a, e.exponent)
        if coeff is None:
            return None
        return (coeff, k * e.exponent)
    if isinstance(e, (Mul, Div)):
        left = as_monomial(e.lhs, var)
        right = as_monomial(e.rhs, var)
        if left is None or right is None:
            return None
        (la, lk), (ra, rk) = left, right
        if isinstance(e, Mul):
            return (la * ra, lk + rk)
        if ra == 0.0:
            return None
        return (la / ra, lk - rk)
    return None
