"""Univariate expressions and their derivative jets.

Expressions are parsed from text into an immutable tree. Derivatives of any
order up to :py:data:`MAX_ORDER` are computed by pushing truncated Taylor
series through the tree (forward-mode, Taylor flavour), which is exact up to
binary64 rounding.

Grammar, loosest binding first::

    expression := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := primary ("^" exponent)?
    exponent   := "-" exponent | power
    primary    := NUMBER | "x" | FUNCTION "(" expression ")" | "(" expression ")"

``FUNCTION`` is one of ``exp``, ``ln``, ``sin``, ``cos``, ``sqrt``. Exponents
must not depend on ``x``; they are folded to a constant at parse time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import _taylor
from .errors import DomainError, OrderError, ParseError

MAX_ORDER = 12
"""The highest derivative order that can be evaluated."""

_FACTORIALS = np.array([float(math.factorial(k)) for k in range(MAX_ORDER + 1)])


class UnaryOp(Enum):
    """Operators and functions of a single argument."""

    NEG = "neg"
    EXP = "exp"
    LN = "ln"
    SIN = "sin"
    COS = "cos"
    SQRT = "sqrt"


class BinaryOp(Enum):
    """Arithmetic operators of two arguments."""

    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"


@dataclass(frozen=True)
class Constant:
    """A finite binary64 constant."""

    value: float


@dataclass(frozen=True)
class Variable:
    """The variable ``x``."""


@dataclass(frozen=True)
class Unary:
    """A unary operator or function application."""

    op: UnaryOp
    operand: Node


@dataclass(frozen=True)
class Binary:
    """A binary arithmetic operation."""

    op: BinaryOp
    left: Node
    right: Node


@dataclass(frozen=True)
class Power:
    """A power with a constant exponent."""

    base: Node
    exponent: float


Node = Union[Constant, Variable, Unary, Binary, Power]

_FUNCTIONS = {
    op.value: op
    for op in (UnaryOp.EXP, UnaryOp.LN, UnaryOp.SIN, UnaryOp.COS, UnaryOp.SQRT)
}


@dataclass(frozen=True)
class Expression:
    """A parsed univariate real function.

    Immutable, so it can be shared between threads.
    """

    root: Node
    """The root of the expression tree."""

    source: str
    """The text the expression was parsed from."""

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Jet:
    """The derivatives ``f(x), f'(x), ..., f^(order)(x)`` at one point.

    These are derivative values, not Taylor coefficients.
    """

    point: float
    """Where the derivatives were evaluated."""

    order: int
    """The highest derivative order."""

    derivs: tuple[float, ...]
    """``derivs[k]`` is the k-th derivative at ``point``."""

    def __post_init__(self) -> None:
        if len(self.derivs) != self.order + 1:
            raise ValueError(
                f"jet of order {self.order} needs {self.order + 1} values, "
                f"got {len(self.derivs)}"
            )


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


_TOKEN_PATTERN = re.compile(
    r"""
    (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z_0-9]*)
    |(?P<op>[-+*/^()])
    |(?P<space>\s+)
    |(?P<mismatch>.)
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[_Token]:
    tokens = list()
    for match in _TOKEN_PATTERN.finditer(source):
        kind = match.lastgroup
        assert kind is not None
        offset = len(source[: match.start()].encode())
        if kind == "space":
            continue
        elif kind == "mismatch":
            raise ParseError(f"unexpected character {match.group()!r}", source, offset)
        tokens.append(_Token(kind, match.group(), offset))
    tokens.append(_Token("end", "", len(source.encode())))
    return tokens


class _Parser:
    def __init__(self, source: str) -> None:
        self.source = source
        self.tokens = _tokenize(source)
        self.position = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def advance(self) -> _Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def error(self, message: str, token: _Token | None = None) -> ParseError:
        token = token or self.current
        return ParseError(message, self.source, token.offset)

    def unexpected(self) -> ParseError:
        if self.current.kind == "end":
            return self.error("unexpected end of input")
        return self.error(f"unexpected {self.current.text!r}")

    def expect(self, text: str) -> None:
        if self.current.kind == "op" and self.current.text == text:
            self.advance()
        else:
            raise self.error(
                f"expected {text!r}, found "
                + (repr(self.current.text) if self.current.kind != "end" else "end")
            )

    def parse(self) -> Node:
        if self.current.kind == "end":
            raise self.error("empty expression")
        node = self.expression()
        if self.current.kind != "end":
            raise self.unexpected()
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = BinaryOp.ADD if self.advance().text == "+" else BinaryOp.SUB
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = BinaryOp.MUL if self.advance().text == "*" else BinaryOp.DIV
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Unary(UnaryOp.NEG, self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            start = self.current
            exponent = self.exponent()
            return Power(base, self.fold(exponent, start))
        return base

    def exponent(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Unary(UnaryOp.NEG, self.exponent())
        return self.power()

    def primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise self.error(f"non-finite literal {token.text!r}", token)
            return Constant(value)
        elif token.kind == "name":
            self.advance()
            if token.text == "x":
                return Variable()
            elif token.text in _FUNCTIONS:
                self.expect("(")
                argument = self.expression()
                self.expect(")")
                return Unary(_FUNCTIONS[token.text], argument)
            else:
                raise self.error(f"unknown identifier {token.text!r}", token)
        elif token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        else:
            raise self.unexpected()

    def fold(self, node: Node, start: _Token) -> float:
        if _depends_on_x(node):
            raise self.error("exponent must not depend on x", start)
        try:
            value = float(_series(node, np.zeros(()), 0)[0])
        except DomainError as error:
            raise self.error(f"invalid constant exponent ({error})", start)
        if not math.isfinite(value):
            raise self.error("exponent is not finite", start)
        return value


def _depends_on_x(node: Node) -> bool:
    if isinstance(node, Variable):
        return True
    elif isinstance(node, Constant):
        return False
    elif isinstance(node, Unary):
        return _depends_on_x(node.operand)
    elif isinstance(node, Binary):
        return _depends_on_x(node.left) or _depends_on_x(node.right)
    else:
        return _depends_on_x(node.base)


def parse(source: str) -> Expression:
    """Parses an expression in the variable ``x``.

    Args:
        source: The expression text, e.g. ``"1/(1+x)"`` or ``"exp(x) - x^2"``.

    Returns:
        Expression: The parsed expression.

    Raises:
        ParseError: Raised on empty input, syntax errors, or unknown
            identifiers. The error carries the byte offset of the problem.
    """
    return Expression(root=_Parser(source).parse(), source=source)


def to_source(expression: Expression | Node) -> str:
    """Serializes an expression back to text.

    The output is fully parenthesized, and parses to an expression that
    evaluates identically.

    Args:
        expression: An expression or a tree node

    Returns:
        str: Expression text
    """
    node = expression.root if isinstance(expression, Expression) else expression
    if isinstance(node, Constant):
        text = repr(node.value)
        return f"({text})" if node.value < 0 else text
    elif isinstance(node, Variable):
        return "x"
    elif isinstance(node, Unary):
        if node.op == UnaryOp.NEG:
            return f"(-{to_source(node.operand)})"
        return f"{node.op.value}({to_source(node.operand)})"
    elif isinstance(node, Binary):
        return f"({to_source(node.left)} {node.op.value} {to_source(node.right)})"
    else:
        return f"({to_source(node.base)})^({node.exponent!r})"


def _first(points: NDArray[np.float64], mask: NDArray[np.bool_]) -> float | None:
    if points.ndim == 0:
        return float(points)
    return float(points[np.argmax(mask)])


def _series(node: Node, points: NDArray[np.float64], order: int) -> _taylor.Series:
    if isinstance(node, Constant):
        return _taylor.constant(node.value, points.shape, order)
    elif isinstance(node, Variable):
        return _taylor.variable(points, order)
    elif isinstance(node, Unary):
        a = _series(node.operand, points, order)
        if node.op == UnaryOp.NEG:
            return -a
        elif node.op == UnaryOp.EXP:
            return _taylor.exp(a)
        elif node.op == UnaryOp.LN:
            bad = a[0] <= 0
            if np.any(bad):
                raise DomainError(
                    "logarithm of a non-positive value", _first(points, bad)
                )
            return _taylor.log(a)
        elif node.op == UnaryOp.SQRT:
            bad = a[0] <= 0
            if np.any(bad):
                raise DomainError(
                    "square root of a non-positive value", _first(points, bad)
                )
            return _taylor.sqrt(a)
        elif node.op == UnaryOp.SIN:
            return _taylor.sincos(a)[0]
        else:
            return _taylor.sincos(a)[1]
    elif isinstance(node, Binary):
        left = _series(node.left, points, order)
        right = _series(node.right, points, order)
        if node.op == BinaryOp.ADD:
            return left + right
        elif node.op == BinaryOp.SUB:
            return left - right
        elif node.op == BinaryOp.MUL:
            return _taylor.mul(left, right)
        else:
            bad = right[0] == 0
            if np.any(bad):
                raise DomainError("division by zero", _first(points, bad))
            return _taylor.div(left, right)
    else:
        base = _series(node.base, points, order)
        if float(node.exponent).is_integer():
            exponent = int(node.exponent)
            bad = base[0] == 0
            if exponent < 0 and np.any(bad):
                raise DomainError("division by zero", _first(points, bad))
            return _taylor.integer_power(base, exponent)
        bad = base[0] <= 0
        if np.any(bad):
            raise DomainError(
                "fractional power of a non-positive base", _first(points, bad)
            )
        return _taylor.real_power(base, node.exponent)


def taylor_coefficients(
    f: Expression, points: ArrayLike, order: int
) -> NDArray[np.float64]:
    """Evaluates Taylor coefficients of ``f`` at many points at once.

    Args:
        f: The expression
        points: Evaluation points, any shape
        order: Highest coefficient, between 0 and :py:data:`MAX_ORDER`

    Returns:
        NDArray[np.float64]: Array of shape ``(order + 1, *points.shape)``
        holding ``f^(k)(x) / k!``.

    Raises:
        OrderError: Raised if ``order`` is out of range.
        DomainError: Raised if any point is outside the domain of ``f``, or a
            coefficient is not finite.
    """
    if not 0 <= order <= MAX_ORDER:
        raise OrderError(
            f"derivative order must be between 0 and {MAX_ORDER}: {order}"
        )
    x = np.asarray(points, dtype=np.float64)
    with np.errstate(all="ignore"):
        series = _series(f.root, x, order)
    bad = ~np.isfinite(series).all(axis=0)
    if np.any(bad):
        raise DomainError(f"non-finite derivative of {f.source!r}", _first(x, bad))
    return series


def derivatives(f: Expression, points: ArrayLike, order: int) -> NDArray[np.float64]:
    """Evaluates derivatives of ``f`` at many points at once.

    Same as :py:func:`taylor_coefficients`, with row ``k`` rescaled by ``k!``
    so that it holds ``f^(k)(x)``.
    """
    series = taylor_coefficients(f, points, order)
    scale = _FACTORIALS[: order + 1].reshape((-1,) + (1,) * (series.ndim - 1))
    derivs: NDArray[np.float64] = series * scale
    if not np.isfinite(derivs).all():
        bad = ~np.isfinite(derivs).all(axis=0)
        raise DomainError(
            f"non-finite derivative of {f.source!r}",
            _first(np.asarray(points, dtype=np.float64), bad),
        )
    return derivs


def evaluate(f: Expression, points: ArrayLike) -> NDArray[np.float64]:
    """Evaluates ``f`` itself at many points."""
    return derivatives(f, points, 0)[0]


def eval_jet(f: Expression, x: float, order: int) -> Jet:
    """Evaluates the derivatives of ``f`` up to ``order`` at a single point.

    Args:
        f: The expression
        x: The point
        order: Highest derivative, between 0 and :py:data:`MAX_ORDER`

    Returns:
        Jet: The derivative values at ``x``

    Raises:
        OrderError: Raised if ``order`` is out of range.
        DomainError: Raised if ``x`` is outside the domain of ``f``.
    """
    derivs = derivatives(f, float(x), order)
    return Jet(point=float(x), order=order, derivs=tuple(float(d) for d in derivs))
