"""Parse, evaluate and differentiate univariate expressions in x.

Grammar (infix, whitespace-insensitive, no implicit multiplication):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sin | cos | tan | exp | ln | sqrt | abs | sign
    NUMBER := digits with an optional decimal point (no exponent notation)

Unary minus binds looser than '^', so -x^2 means -(x^2).  Trees are
immutable and hashable; evaluation is deterministic for a given tree and x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ExpressionError(ValueError):
    """Base class for errors raised by this module."""


class ParseError(ExpressionError):
    """Syntax or identifier error; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvalDomainError(ExpressionError):
    """The expression is undefined at the requested point."""


FUNCTION_NAMES = ("sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "sign")
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


def _sign(v: float) -> float:
    return float((v > 0) - (v < 0))


_FUNCTION_IMPLS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
    "sign": _sign,
}


@dataclass(frozen=True)
class Expr:
    """Base node; concrete nodes implement evaluate/derivative/render."""

    def evaluate(self, x: float) -> float:
        raise NotImplementedError

    def derivative(self) -> "Expr":
        raise NotImplementedError

    # Rendering precedence: 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atoms.
    def render(self) -> str:
        raise NotImplementedError

    def precedence(self) -> int:
        return 5

    def pysrc(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, x):
        return self.value

    def derivative(self):
        return Const(0.0)

    def render(self):
        v = self.value
        if v == int(v) and abs(v) < 1e16:
            return str(int(v))
        return repr(v)

    def precedence(self):
        return 5 if self.value >= 0 else 3

    def pysrc(self):
        return repr(self.value)


@dataclass(frozen=True)
class NamedConst(Expr):
    name: str  # 'pi' or 'e'

    def evaluate(self, x):
        return NAMED_CONSTANTS[self.name]

    def derivative(self):
        return Const(0.0)

    def render(self):
        return self.name

    def pysrc(self):
        return f"math.{'pi' if self.name == 'pi' else 'e'}"


@dataclass(frozen=True)
class Var(Expr):
    def evaluate(self, x):
        return x

    def derivative(self):
        return Const(1.0)

    def render(self):
        return "x"

    def pysrc(self):
        return "x"


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr

    def evaluate(self, x):
        v = self.arg.evaluate(x)
        if self.fn == "ln" and v <= 0.0:
            raise EvalDomainError(f"ln of non-positive value {v!r} at x={x!r}")
        if self.fn == "sqrt" and v < 0.0:
            raise EvalDomainError(f"sqrt of negative value {v!r} at x={x!r}")
        try:
            return _FUNCTION_IMPLS[self.fn](v)
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(f"{self.fn}({v!r}) undefined at x={x!r}") from exc

    def derivative(self):
        u, du = self.arg, self.arg.derivative()
        if self.fn == "sin":
            return _mul(Call("cos", u), du)
        if self.fn == "cos":
            return _neg(_mul(Call("sin", u), du))
        if self.fn == "tan":
            return _div(du, _pow(Call("cos", u), Const(2.0)))
        if self.fn == "exp":
            return _mul(Call("exp", u), du)
        if self.fn == "ln":
            return _div(du, u)
        if self.fn == "sqrt":
            return _div(du, _mul(Const(2.0), Call("sqrt", u)))
        if self.fn == "abs":
            # sign(u)*u' with sign(0) = 0, so |.|' is 0 at the kink.
            return _mul(Call("sign", u), du)
        if self.fn == "sign":
            return Const(0.0)
        raise ExpressionError(f"no derivative rule for {self.fn}")

    def render(self):
        return f"{self.fn}({self.arg.render()})"

    def pysrc(self):
        if self.fn == "abs":
            return f"abs({self.arg.pysrc()})"
        if self.fn == "sign":
            return f"_sign({self.arg.pysrc()})"
        name = "log" if self.fn == "ln" else self.fn
        return f"math.{name}({self.arg.pysrc()})"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def evaluate(self, x):
        return -self.arg.evaluate(x)

    def derivative(self):
        return _neg(self.arg.derivative())

    def render(self):
        inner = self.arg.render()
        if self.arg.precedence() < 2:
            inner = f"({inner})"
        return f"-{inner}"

    def precedence(self):
        return 3

    def pysrc(self):
        return f"(-{self.arg.pysrc()})"


_BINARY_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def evaluate(self, x):
        a = self.left.evaluate(x)
        b = self.right.evaluate(x)
        op = self.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise EvalDomainError(f"division by zero at x={x!r}")
            return a / b
        try:
            r = a**b
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise EvalDomainError(f"{a!r}^{b!r} undefined at x={x!r}") from exc
        if isinstance(r, complex):
            raise EvalDomainError(
                f"{a!r}^{b!r} is not real (negative base, fractional power) at x={x!r}"
            )
        return r

    def derivative(self):
        u, v = self.left, self.right
        du, dv = u.derivative(), v.derivative()
        op = self.op
        if op == "+":
            return _add(du, dv)
        if op == "-":
            return _sub(du, dv)
        if op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Const(2.0)))
        # Power: use the power rule for constant exponents so that e.g. x^3
        # stays defined for negative x; fall back to u^v*(v'*ln u + v*u'/u).
        if _is_constant(v):
            return _mul(_mul(v, _pow(u, _sub(v, Const(1.0)))), du)
        return _mul(
            Binary("^", u, v),
            _add(_mul(dv, Call("ln", u)), _div(_mul(v, du), u)),
        )

    def render(self):
        prec = _BINARY_PRECEDENCE[self.op]
        left, right = self.left.render(), self.right.render()
        if self.op == "^":
            if self.left.precedence() <= 4:
                left = f"({left})"
            if self.right.precedence() < 5:
                right = f"({right})"
            return f"{left}^{right}"
        if self.left.precedence() < prec:
            left = f"({left})"
        # '-' and '/' are left-associative: parenthesize same-precedence rhs.
        if self.right.precedence() < prec or (
            self.op in ("-", "/") and self.right.precedence() == prec
        ):
            right = f"({right})"
        if prec == 1:
            return f"{left} {self.op} {right}"
        return f"{left}{self.op}{right}"

    def precedence(self):
        return _BINARY_PRECEDENCE[self.op]

    def pysrc(self):
        op = "**" if self.op == "^" else self.op
        return f"({self.left.pysrc()}{op}{self.right.pysrc()})"


def _is_constant(e: Expr) -> bool:
    if isinstance(e, (Const, NamedConst)):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return _is_constant(e.arg)
    if isinstance(e, Call):
        return _is_constant(e.arg)
    return _is_constant(e.left) and _is_constant(e.right)


# Smart constructors used by differentiation; they fold the obvious
# identities (0+g, 1*g, g^1, constant arithmetic) to keep derivative
# trees small, and never change where an expression is defined except
# for the 0*g -> 0 rule.

def _const_val(e):
    return e.value if isinstance(e, Const) else None


def _add(a, b):
    if _const_val(a) == 0.0:
        return b
    if _const_val(b) == 0.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Binary("+", a, b)


def _sub(a, b):
    if _const_val(b) == 0.0:
        return a
    if _const_val(a) == 0.0:
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Binary("-", a, b)


def _mul(a, b):
    if _const_val(a) == 0.0 or _const_val(b) == 0.0:
        return Const(0.0)
    if _const_val(a) == 1.0:
        return b
    if _const_val(b) == 1.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Binary("*", a, b)


def _div(a, b):
    if _const_val(a) == 0.0:
        return Const(0.0)
    if _const_val(b) == 1.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    return Binary("/", a, b)


def _pow(a, b):
    if _const_val(b) == 1.0:
        return a
    if _const_val(b) == 0.0:
        return Const(1.0)
    if isinstance(a, Const) and isinstance(b, Const):
        try:
            v = a.value**b.value
        except (ZeroDivisionError, OverflowError, ValueError):
            v = None
        if isinstance(v, float):
            return Const(v)
    return Binary("^", a, b)


def _neg(a):
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


# ---------------------------------------------------------------------------
# Tokenizer / parser


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if text[i:j] == ".":
                raise ParseError("bare '.' is not a number", i)
            tokens.append(_Token("number", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok.pos)
        return self.take()

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            e = Binary(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            e = Binary(op, e, self.unary())
        return e

    def unary(self):
        if self.peek().kind == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            self.take()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            return Const(float(tok.text))
        if tok.kind == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "ident":
            self.take()
            name = tok.text
            if name == "x":
                return Var()
            if name in NAMED_CONSTANTS:
                return NamedConst(name)
            if name in FUNCTION_NAMES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            raise ParseError(f"unknown identifier {name!r}", tok.pos)
        found = tok.text or "end of input"
        raise ParseError(f"expected a value, found {found!r}", tok.pos)


# ---------------------------------------------------------------------------
# Public operations


def parse(text: str) -> Expr:
    """Parse an infix expression in x into a tree.

    Raises ParseError (with character offset) on malformed input, unknown
    identifiers, or empty input.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


def evaluate(e: Expr, x: float) -> float:
    """Evaluate a tree at x; raises EvalDomainError where undefined."""
    return e.evaluate(x)


def differentiate(e: Expr) -> Expr:
    """Exact symbolic derivative of e with respect to x."""
    return e.derivative()


def render(e: Expr) -> str:
    """Render a tree back to parseable text."""
    return e.render()


def compile_expr(e: Expr):
    """Compile a tree to a plain Python callable.

    The generated code performs the same IEEE operations in the same order
    as evaluate(), so the results are bit-for-bit identical where defined
    (raw ZeroDivisionError/ValueError/OverflowError escape instead of
    EvalDomainError; hot loops catch those at their boundary).
    """
    src = f"lambda x: {e.pysrc()}"
    namespace = {"math": math, "abs": abs, "_sign": _sign, "__builtins__": {}}
    return eval(src, namespace)  # noqa: S307 - source is generated from our own AST
