"""Expressions of one variable with exact first and second derivatives.

Kinetic and potential energies are supplied by the user as infix strings
(``"2*sqrt(p^2)"``, ``"p^2/2 + 0.01*p^4"``, ``"-1/r"``). :func:`parse` turns a
string into an immutable :class:`Expression` tree; :class:`FunctionModel`
compiles the tree into fast closures for values and for :class:`Jet2`
(value, first and second derivative) propagated with truncated-Taylor
arithmetic. Both closures accept Python floats and numpy arrays.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Mapping

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DomainError,
    ExpressionSyntaxError,
    NonMonotoneError,
    NotBracketedError,
    UnknownIdentifierError,
)

logger = logging.getLogger(__name__)

FUNCTIONS = ("sqrt", "exp", "log", "abs")
MONOTONE_SAMPLES = 33

Number = float | np.ndarray


# --------------------------------------------------------------------------
# Syntax tree
# --------------------------------------------------------------------------


class Expression:
    """Base class of syntax tree nodes. Nodes are frozen dataclasses."""

    def variables(self) -> frozenset[str]:
        raise NotImplementedError

    def substitute(self, name: str, replacement: "Expression") -> "Expression":
        raise NotImplementedError

    def has_variable(self) -> bool:
        return bool(self.variables())


@dataclass(frozen=True)
class Constant(Expression):
    value: float

    def variables(self) -> frozenset[str]:
        return frozenset()

    def substitute(self, name, replacement):
        return self

    def __str__(self):
        return repr(self.value) if self.value >= 0 else f"({self.value!r})"


@dataclass(frozen=True)
class Variable(Expression):
    name: str

    def variables(self) -> frozenset[str]:
        return frozenset({self.name})

    def substitute(self, name, replacement):
        return replacement if name == self.name else self

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Negate(Expression):
    operand: Expression

    def variables(self):
        return self.operand.variables()

    def substitute(self, name, replacement):
        return Negate(self.operand.substitute(name, replacement))

    def __str__(self):
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/"):
            raise ValueError(f"Unsupported operator '{self.op}'")

    def variables(self):
        return self.left.variables() | self.right.variables()

    def substitute(self, name, replacement):
        return BinaryOp(
            self.op,
            self.left.substitute(name, replacement),
            self.right.substitute(name, replacement),
        )

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Power(Expression):
    base: Expression
    exponent: Expression

    def variables(self):
        return self.base.variables() | self.exponent.variables()

    def substitute(self, name, replacement):
        return Power(
            self.base.substitute(name, replacement),
            self.exponent.substitute(name, replacement),
        )

    def __str__(self):
        return f"({self.base}^{self.exponent})"


@dataclass(frozen=True)
class Call(Expression):
    func: str
    argument: Expression

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"Unsupported function '{self.func}'")

    def variables(self):
        return self.argument.variables()

    def substitute(self, name, replacement):
        return Call(self.func, self.argument.substitute(name, replacement))

    def __str__(self):
        return f"{self.func}({self.argument})"


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()−])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(source, pos)
        if match is None or match.end() == pos:
            raise ExpressionSyntaxError(f"Unexpected character {source[pos]!r}", pos)
        kind = match.lastgroup
        text = match.group(kind)
        start = match.start(kind)
        if text == "−":
            text = "-"
        tokens.append(_Token(kind, text, start))
        pos = match.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    """Recursive descent over the grammar

    expr  := term (("+"|"-") term)*
    term  := unary (("*"|"/") unary)*
    unary := ("-"|"+") unary | power
    power := base ("^" unary)?
    base  := number | ident | "(" expr ")" | func "(" expr ")"
    """

    def __init__(self, source: str, varname: str, parameters: Mapping[str, float]):
        self.tokens = _tokenize(source)
        self.index = 0
        self.varname = varname
        self.parameters = parameters

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.current
        if token.text != text or token.kind == "end":
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ExpressionSyntaxError(f"Expected {text!r}, found {found}", token.position)
        return self.advance()

    def parse(self) -> Expression:
        node = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"Unexpected {self.current.text!r}", self.current.position)
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = BinaryOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            operand = self.unary()
            return Negate(operand) if op == "-" else operand
        return self.power()

    def power(self) -> Expression:
        base = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            # right associative: the exponent may itself be a power
            return Power(base, self.unary())
        return base

    def base(self) -> Expression:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Constant(float(token.text))
        if token.kind == "ident":
            self.advance()
            if token.text in FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return Call(token.text, argument)
            if token.text == self.varname:
                return Variable(token.text)
            if token.text in self.parameters:
                return Constant(float(self.parameters[token.text]))
            raise UnknownIdentifierError(token.text, token.position, self.varname)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ExpressionSyntaxError(f"Expected a number, name or '(', found {found}", token.position)


def parse(source: str, varname: str, parameters: Mapping[str, float] | None = None) -> Expression:
    """Parse ``source`` with ``varname`` as its only free variable.

    ``parameters`` binds additional names to numeric constants at parse time.
    """
    if not varname.isidentifier() or varname in FUNCTIONS:
        raise ValueError(f"Invalid variable name {varname!r}")
    return _Parser(source, varname, parameters or {}).parse()


# --------------------------------------------------------------------------
# Jets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value, first and second derivative at a point (or at an array of points)."""

    value: Any
    d1: Any
    d2: Any

    @classmethod
    def variable(cls, x: Number) -> "Jet2":
        if isinstance(x, np.ndarray):
            return cls(x, np.ones_like(x), np.zeros_like(x))
        return cls(x, 1.0, 0.0)

    @classmethod
    def constant(cls, c: float) -> "Jet2":
        return cls(c, 0.0, 0.0)

    def chain(self, f0: Number, f1: Number, f2: Number) -> "Jet2":
        """Compose an outer function with derivatives (f0, f1, f2) at ``self.value``."""
        return Jet2(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.d1, -self.d2)

    def __mul__(self, other: "Jet2") -> "Jet2":
        return Jet2(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )

    def __truediv__(self, other: "Jet2") -> "Jet2":
        q = self.value / other.value
        q1 = (self.d1 - q * other.d1) / other.value
        q2 = (self.d2 - 2.0 * q1 * other.d1 - q * other.d2) / other.value
        return Jet2(q, q1, q2)

    def broadcast(self, shape: tuple[int, ...]) -> "Jet2":
        return Jet2(
            np.broadcast_to(np.asarray(self.value, dtype=float), shape).copy(),
            np.broadcast_to(np.asarray(self.d1, dtype=float), shape).copy(),
            np.broadcast_to(np.asarray(self.d2, dtype=float), shape).copy(),
        )


# --------------------------------------------------------------------------
# Compilation to closures
# --------------------------------------------------------------------------


class _ScalarOps:
    sqrt = staticmethod(math.sqrt)
    log = staticmethod(math.log)
    fabs = staticmethod(abs)

    @staticmethod
    def exp(x):
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf

    @staticmethod
    def pow(x, c):
        try:
            return x**c
        except OverflowError:
            return math.inf

    @staticmethod
    def sign(x):
        return (x > 0) - (x < 0)

    @staticmethod
    def any(mask) -> bool:
        return bool(mask)


class _ArrayOps:
    sqrt = staticmethod(np.sqrt)
    exp = staticmethod(np.exp)
    log = staticmethod(np.log)
    fabs = staticmethod(np.abs)
    sign = staticmethod(np.sign)
    pow = staticmethod(np.power)

    @staticmethod
    def any(mask) -> bool:
        return bool(np.any(mask))


def _first_offending(x: Number, mask: Any) -> Any:
    if isinstance(x, np.ndarray) and np.ndim(mask):
        return x[np.asarray(mask)].flat[0]
    return x


def _integral(c: float) -> bool:
    return float(c).is_integer()


def _compile_value(node: Expression, ops) -> Callable[[Number], Number]:
    if isinstance(node, Constant):
        c = node.value
        return lambda x: c
    if isinstance(node, Variable):
        return lambda x: x
    if isinstance(node, Negate):
        inner = _compile_value(node.operand, ops)
        return lambda x: -inner(x)
    if isinstance(node, BinaryOp):
        left = _compile_value(node.left, ops)
        right = _compile_value(node.right, ops)
        if node.op == "+":
            return lambda x: left(x) + right(x)
        if node.op == "-":
            return lambda x: left(x) - right(x)
        if node.op == "*":
            return lambda x: left(x) * right(x)

        def divide(x):
            den = right(x)
            zero = den == 0
            if ops.any(zero):
                raise DomainError(f"Division by zero in '{node}'", _first_offending(x, zero))
            return left(x) / den

        return divide
    if isinstance(node, Power):
        base = _compile_value(node.base, ops)
        if not node.exponent.has_variable():
            c = _compile_value(node.exponent, ops)(0.0)
            integral = _integral(c)

            def power(x):
                b = base(x)
                _check_power_domain(node, x, b, c, integral, ops)
                return ops.pow(b, c)

            return power
        exponent = _compile_value(node.exponent, ops)

        def general_power(x):
            b = base(x)
            bad = b <= 0
            if ops.any(bad):
                raise DomainError(
                    f"Variable exponent needs a positive base in '{node}'", _first_offending(x, bad)
                )
            return ops.exp(exponent(x) * ops.log(b))

        return general_power
    if isinstance(node, Call):
        arg = _compile_value(node.argument, ops)
        if node.func == "sqrt":

            def sqrt(x):
                a = arg(x)
                bad = a < 0
                if ops.any(bad):
                    raise DomainError(f"sqrt of negative argument in '{node}'", _first_offending(x, bad))
                return ops.sqrt(a)

            return sqrt
        if node.func == "log":

            def log(x):
                a = arg(x)
                bad = a <= 0
                if ops.any(bad):
                    raise DomainError(f"log of non-positive argument in '{node}'", _first_offending(x, bad))
                return ops.log(a)

            return log
        if node.func == "exp":
            return lambda x: ops.exp(arg(x))
        return lambda x: ops.fabs(arg(x))
    raise TypeError(f"Unknown expression node {type(node).__name__}")


def _check_power_domain(node, x, b, c, integral, ops) -> None:
    if not integral:
        bad = b < 0
        if ops.any(bad):
            raise DomainError(
                f"Negative base with non-integer exponent in '{node}'", _first_offending(x, bad)
            )
    if c < 0:
        bad = b == 0
        if ops.any(bad):
            raise DomainError(f"0 raised to a negative power in '{node}'", _first_offending(x, bad))


def _compile_jet(node: Expression, ops) -> Callable[[Number], Jet2]:
    if isinstance(node, Constant):
        c = node.value
        return lambda x: Jet2.constant(c)
    if isinstance(node, Variable):
        return Jet2.variable
    if isinstance(node, Negate):
        inner = _compile_jet(node.operand, ops)
        return lambda x: -inner(x)
    if isinstance(node, BinaryOp):
        left = _compile_jet(node.left, ops)
        right = _compile_jet(node.right, ops)
        if node.op == "+":
            return lambda x: left(x) + right(x)
        if node.op == "-":
            return lambda x: left(x) - right(x)
        if node.op == "*":
            return lambda x: left(x) * right(x)

        def divide(x):
            den = right(x)
            zero = den.value == 0
            if ops.any(zero):
                raise DomainError(f"Division by zero in '{node}'", _first_offending(x, zero))
            return left(x) / den

        return divide
    if isinstance(node, Power):
        base = _compile_jet(node.base, ops)
        if not node.exponent.has_variable():
            c = _compile_value(node.exponent, _ScalarOps)(0.0)
            integral = _integral(c)

            def power(x):
                u = base(x)
                _check_power_domain(node, x, u.value, c, integral, ops)
                if c == 0:
                    return Jet2.constant(1.0)
                if c == 1:
                    return u
                if not integral and c < 2:
                    bad = u.value == 0
                    if ops.any(bad):
                        raise DomainError(
                            f"Derivative of '{node}' is singular at 0", _first_offending(x, bad)
                        )
                return u.chain(
                    ops.pow(u.value, c),
                    c * ops.pow(u.value, c - 1),
                    c * (c - 1) * ops.pow(u.value, c - 2),
                )

            return power
        exponent = _compile_jet(node.exponent, ops)
        log_base = _compile_jet(Call("log", node.base), ops)

        def general_power(x):
            v = exponent(x) * log_base(x)
            e = ops.exp(v.value)
            return v.chain(e, e, e)

        return general_power
    if isinstance(node, Call):
        arg = _compile_jet(node.argument, ops)
        if node.func == "sqrt":

            def sqrt(x):
                u = arg(x)
                bad = u.value <= 0
                if ops.any(bad):
                    raise DomainError(
                        f"sqrt needs a positive argument for derivatives in '{node}'",
                        _first_offending(x, bad),
                    )
                s = ops.sqrt(u.value)
                f1 = 0.5 / s
                return u.chain(s, f1, -0.5 * f1 / u.value)

            return sqrt
        if node.func == "log":

            def log(x):
                u = arg(x)
                bad = u.value <= 0
                if ops.any(bad):
                    raise DomainError(f"log of non-positive argument in '{node}'", _first_offending(x, bad))
                inv = 1.0 / u.value
                return u.chain(ops.log(u.value), inv, -inv * inv)

            return log
        if node.func == "exp":

            def exp(x):
                u = arg(x)
                e = ops.exp(u.value)
                return u.chain(e, e, e)

            return exp

        def absolute(x):
            u = arg(x)
            # derivative of |u| at u = 0 is taken as 0
            s = ops.sign(u.value)
            return u.chain(ops.fabs(u.value), s, 0.0 * s)

        return absolute
    raise TypeError(f"Unknown expression node {type(node).__name__}")


# --------------------------------------------------------------------------
# Function models
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionModel:
    """A parsed scalar function of one variable, such as T(p), V(r) or U(y)."""

    expression: Expression
    variable: str
    source: str | None = None

    def __post_init__(self):
        extra = self.expression.variables() - {self.variable}
        if extra:
            raise ValueError(
                f"Expression depends on {sorted(extra)} but the model variable is '{self.variable}'"
            )
        if self.source is None:
            object.__setattr__(self, "source", str(self.expression))

    @cached_property
    def _scalar_value(self):
        return _compile_value(self.expression, _ScalarOps)

    @cached_property
    def _array_value(self):
        return _compile_value(self.expression, _ArrayOps)

    @cached_property
    def _scalar_jet(self):
        return _compile_jet(self.expression, _ScalarOps)

    @cached_property
    def _array_jet(self):
        return _compile_jet(self.expression, _ArrayOps)

    def __call__(self, x: Number) -> Number:
        if isinstance(x, np.ndarray):
            x = x.astype(float, copy=False)
            with np.errstate(over="ignore", invalid="ignore"):
                result = self._array_value(x)
            return np.broadcast_to(np.asarray(result, dtype=float), x.shape).copy()
        return float(self._scalar_value(float(x)))

    def jet(self, x: Number) -> Jet2:
        if isinstance(x, np.ndarray):
            x = x.astype(float, copy=False)
            with np.errstate(over="ignore", invalid="ignore"):
                return self._array_jet(x).broadcast(x.shape)
        j = self._scalar_jet(float(x))
        return Jet2(float(j.value), float(j.d1), float(j.d2))

    def derivative(self, x: Number) -> Number:
        return self.jet(x).d1

    def second_derivative(self, x: Number) -> Number:
        return self.jet(x).d2

    def with_variable(self, name: str) -> "FunctionModel":
        if name == self.variable:
            return self
        return FunctionModel(self.expression.substitute(self.variable, Variable(name)), name)

    def compose(self, inner: "FunctionModel") -> "FunctionModel":
        """Return ``self(inner(t))`` as a model in ``inner``'s variable."""
        return FunctionModel(self.expression.substitute(self.variable, inner.expression), inner.variable)

    def scaled(self, factor: float) -> "FunctionModel":
        return FunctionModel(BinaryOp("*", Constant(float(factor)), self.expression), self.variable)

    def __add__(self, other: "FunctionModel") -> "FunctionModel":
        if not isinstance(other, FunctionModel):
            return NotImplemented
        if other.variable != self.variable:
            other = other.with_variable(self.variable)
        return FunctionModel(BinaryOp("+", self.expression, other.expression), self.variable)

    def proportional_to(self, other: "FunctionModel", samples: np.ndarray, rtol: float = 1e-12) -> bool:
        """True when ``self / other`` is the same constant on every sample point."""
        mine = self(samples)
        theirs = other.with_variable(self.variable)(samples)
        if not (np.all(np.isfinite(mine)) and np.all(np.isfinite(theirs))) or np.any(theirs == 0):
            return False
        ratio = mine / theirs
        return bool(np.all(np.abs(ratio - ratio[0]) <= rtol * abs(ratio[0])))

    def __str__(self):
        return self.source


def parse_model(source: str, varname: str, parameters: Mapping[str, float] | None = None) -> FunctionModel:
    return FunctionModel(parse(source, varname, parameters), varname, source)


def constant_model(value: float, varname: str) -> FunctionModel:
    return FunctionModel(Constant(float(value)), varname)


def _as_model(f: Expression | FunctionModel) -> FunctionModel:
    if isinstance(f, FunctionModel):
        return f
    names = f.variables()
    if len(names) > 1:
        raise ValueError(f"Expression has several free variables: {sorted(names)}")
    return FunctionModel(f, next(iter(names)) if names else "x")


def eval_jet2(f: Expression | FunctionModel, x: Number) -> Jet2:
    """Value and first two derivatives of ``f`` at ``x`` by jet propagation."""
    return _as_model(f).jet(x)


def invert_monotone(
    f: Expression | FunctionModel,
    y: float,
    lo: float,
    hi: float,
    *,
    check: bool = True,
) -> float:
    """Solve ``f(x) = y`` for x in ``[lo, hi]`` where f is strictly monotone.

    The bracket is refined with Brent's method (bisection safeguarded secant
    and inverse quadratic steps). Unless ``check`` is False the function is
    first sampled at 33 points and rejected if the sampled slope changes sign.
    """
    model = _as_model(f)
    if not lo < hi:
        raise ValueError(f"Empty bracket [{lo}, {hi}]")

    if check:
        samples = model(np.linspace(lo, hi, MONOTONE_SAMPLES))
        if not np.all(np.isfinite(samples)):
            raise DomainError(f"'{model}' is not finite on [{lo:g}, {hi:g}]")
        steps = np.diff(samples)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise NonMonotoneError(f"'{model}' is not strictly monotone on [{lo:g}, {hi:g}]")

    f_lo = model(lo)
    f_hi = model(hi)
    tolerance = 1e-12 * (1.0 + abs(y))
    if abs(f_lo - y) <= tolerance:
        return float(lo)
    if abs(f_hi - y) <= tolerance:
        return float(hi)
    if (f_lo - y) * (f_hi - y) > 0:
        raise NotBracketedError(
            f"{y:.6g} is outside [{min(f_lo, f_hi):.6g}, {max(f_lo, f_hi):.6g}] "
            f"spanned by '{model}' on [{lo:g}, {hi:g}]"
        )

    xtol = 1e-18 * max(1.0, abs(lo), abs(hi))
    root = brentq(lambda t: model(t) - y, lo, hi, xtol=xtol, maxiter=500)
    residual = abs(model(root) - y)
    if residual > tolerance:
        logger.debug("Inversion of '%s' at y=%g left residual %.3g", model, y, residual)
    return float(root)
