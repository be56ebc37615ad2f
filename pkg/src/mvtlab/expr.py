"""Expression trees for real functions of one variable.

Function text is parsed by recursive descent into an immutable AST that can
be evaluated on the extended real line, compiled to a fast callable,
differentiated symbolically to any order, simplified, and printed back to
parseable text.

Grammar (no implicit multiplication; unary minus binds tighter than ``^``,
which is right-associative)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-' unary | atom
    atom   := NUMBER | 'x' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

Evaluation follows IEEE-style propagation: division by zero yields a signed
infinity, out-of-domain function arguments yield nan, and nan is absorbing
through every operation (including ``1^nan``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterator

__all__ = [
    "Expr", "Const", "Var", "Neg", "Bin", "Call",
    "ParseError", "FUNCTIONS",
    "parse", "unparse", "evaluate", "compile_fn",
    "differentiate", "simplify", "substitute", "sign_sensitive_args",
]

FUNCTIONS = ("sin", "cos", "tan", "asin", "acos", "atan",
             "exp", "ln", "sqrt", "abs", "sgn")

_CONSTANTS = {"pi": math.pi, "e": math.e}


# ---------------------------------------------------------------------------
# AST


class Expr:
    """Base node. All nodes are immutable, hashable, and comparable."""

    __slots__ = ()

    def __add__(self, other: Expr | float) -> Expr:
        return Bin("+", self, _coerce(other))

    def __radd__(self, other: Expr | float) -> Expr:
        return Bin("+", _coerce(other), self)

    def __sub__(self, other: Expr | float) -> Expr:
        return Bin("-", self, _coerce(other))

    def __rsub__(self, other: Expr | float) -> Expr:
        return Bin("-", _coerce(other), self)

    def __mul__(self, other: Expr | float) -> Expr:
        return Bin("*", self, _coerce(other))

    def __rmul__(self, other: Expr | float) -> Expr:
        return Bin("*", _coerce(other), self)

    def __truediv__(self, other: Expr | float) -> Expr:
        return Bin("/", self, _coerce(other))

    def __rtruediv__(self, other: Expr | float) -> Expr:
        return Bin("/", _coerce(other), self)

    def __pow__(self, other: Expr | float) -> Expr:
        return Bin("^", self, _coerce(other))

    def __neg__(self) -> Expr:
        return Neg(self)

    def __str__(self) -> str:
        return unparse(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True, slots=True)
class Bin(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    fn: str  # element of FUNCTIONS
    arg: Expr


def _coerce(v: Expr | float) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(float(v))


# ---------------------------------------------------------------------------
# Extended-real arithmetic helpers. evaluate() and compile_fn() both go
# through these so the two paths cannot drift apart.

_NAN = math.nan
_INF = math.inf


def _div(num: float, den: float) -> float:
    if math.isnan(num) or math.isnan(den):
        return _NAN
    if den == 0.0:
        if num == 0.0:
            return _NAN
        same = (num > 0.0) == (math.copysign(1.0, den) > 0.0)
        return _INF if same else -_INF
    return num / den


def _pow(base: float, exp: float) -> float:
    if math.isnan(base) or math.isnan(exp):
        return _NAN
    # negative base is real only for integer exponents
    if base < 0.0 and math.isfinite(exp) and exp != math.floor(exp):
        return _NAN
    if base == 0.0 and exp < 0.0:
        return _INF
    try:
        return math.pow(base, exp)
    except OverflowError:
        if base < 0.0 and math.fmod(exp, 2.0) == 1.0:
            return -_INF
        return _INF
    except ValueError:
        return _NAN


def _ln(v: float) -> float:
    if math.isnan(v) or v < 0.0:
        return _NAN
    if v == 0.0:
        return -_INF
    if v == _INF:
        return _INF
    return math.log(v)


def _sgn(v: float) -> float:
    if math.isnan(v):
        return _NAN
    if v > 0.0:
        return 1.0
    if v < 0.0:
        return -1.0
    return 0.0


def _guard(fn: Callable[[float], float]) -> Callable[[float], float]:
    # math.* raises ValueError out of domain and OverflowError past the
    # float range; map those onto nan / +inf
    def wrapped(v: float) -> float:
        if math.isnan(v):
            return _NAN
        try:
            return fn(v)
        except ValueError:
            return _NAN
        except OverflowError:
            return _INF
    return wrapped


_FN_EVAL: dict[str, Callable[[float], float]] = {
    "sin": _guard(math.sin),
    "cos": _guard(math.cos),
    "tan": _guard(math.tan),
    "asin": _guard(math.asin),
    "acos": _guard(math.acos),
    "atan": _guard(math.atan),
    "exp": _guard(math.exp),
    "ln": _ln,
    "sqrt": _guard(math.sqrt),
    "abs": abs,
    "sgn": _sgn,
}


def evaluate(e: Expr, x: float) -> float:
    """Evaluate ``e`` at ``x`` on the extended real line (nan = undefined)."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(x)
    if isinstance(e, Neg):
        return -evaluate(e.child, x)
    if isinstance(e, Bin):
        lv = evaluate(e.left, x)
        rv = evaluate(e.right, x)
        op = e.op
        if op == "+":
            return lv + rv
        if op == "-":
            return lv - rv
        if op == "*":
            return lv * rv
        if op == "/":
            return _div(lv, rv)
        return _pow(lv, rv)
    if isinstance(e, Call):
        return _FN_EVAL[e.fn](evaluate(e.arg, x))
    raise TypeError(f"not an Expr node: {e!r}")


def compile_fn(e: Expr) -> Callable[[float], float]:
    """Build a plain callable for ``e``.

    Semantics are identical to :func:`evaluate`; the closure form just skips
    the per-call tree dispatch, which matters on dense scan grids.
    """
    if isinstance(e, Const):
        v = e.value
        return lambda x: v
    if isinstance(e, Var):
        return float
    if isinstance(e, Neg):
        c = compile_fn(e.child)
        return lambda x: -c(x)
    if isinstance(e, Bin):
        lf = compile_fn(e.left)
        rf = compile_fn(e.right)
        op = e.op
        if op == "+":
            return lambda x: lf(x) + rf(x)
        if op == "-":
            return lambda x: lf(x) - rf(x)
        if op == "*":
            return lambda x: lf(x) * rf(x)
        if op == "/":
            return lambda x: _div(lf(x), rf(x))
        return lambda x: _pow(lf(x), rf(x))
    if isinstance(e, Call):
        g = _FN_EVAL[e.fn]
        c = compile_fn(e.arg)
        return lambda x: g(c(x))
    raise TypeError(f"not an Expr node: {e!r}")


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    """Raised on malformed input. ``offset`` indexes into the source text."""

    def __init__(self, offset: int, message: str, expected: str | None = None):
        self.offset = offset
        self.message = message
        self.expected = expected
        hint = f", expected {expected}" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


_NUMBER_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.source):
            return ""
        return self.source[self.pos]

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(self.pos, f"unexpected {self.describe()}", expected=repr(ch))
        self.pos += 1

    def describe(self) -> str:
        if self.pos >= len(self.source):
            return "end of input"
        return repr(self.source[self.pos])

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.source):
            raise ParseError(self.pos, f"trailing input starting with {self.describe()}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            ch = self.peek()
            if ch == "+" or ch == "-":
                self.pos += 1
                e = Bin(ch, e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            ch = self.peek()
            if ch == "*" or ch == "/":
                self.pos += 1
                e = Bin(ch, e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        e = self.unary()
        if self.peek() == "^":
            self.pos += 1
            return Bin("^", e, self.factor())
        return e

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        m = _NUMBER_RE.match(self.source, self.pos)
        if m:
            self.pos = m.end()
            return Const(float(m.group()))
        m = _NAME_RE.match(self.source, self.pos)
        if m:
            name = m.group()
            start = self.pos
            self.pos = m.end()
            if name == "x":
                return Var()
            if name in _CONSTANTS:
                return Const(_CONSTANTS[name])
            if name in _FN_EVAL:
                if self.peek() != "(":
                    raise ParseError(self.pos, f"function {name!r} needs an argument",
                                     expected="'('")
                self.pos += 1
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            raise ParseError(start, f"unknown name {name!r}")
        raise ParseError(self.pos, f"unexpected {self.describe()}",
                         expected="a number, name, or '('")


def parse(source: str) -> Expr:
    """Parse function text in the single variable ``x`` into an AST."""
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Printing. Levels mirror the grammar so parse(unparse(e)) restores e for
# every e that parse itself can produce.

_LEVEL_ADD = 1
_LEVEL_MUL = 2
_LEVEL_POW = 3
_LEVEL_UNARY = 4
_LEVEL_ATOM = 5


def _level(e: Expr) -> int:
    if isinstance(e, Bin):
        if e.op in "+-":
            return _LEVEL_ADD
        if e.op in "*/":
            return _LEVEL_MUL
        return _LEVEL_POW
    if isinstance(e, Neg):
        return _LEVEL_UNARY
    if isinstance(e, Const) and (e.value < 0.0 or math.copysign(1.0, e.value) < 0.0):
        return _LEVEL_UNARY  # prints with a leading minus
    return _LEVEL_ATOM


def _wrap(e: Expr, min_level: int) -> str:
    text = unparse(e)
    if _level(e) < min_level:
        return f"({text})"
    return text


def unparse(e: Expr) -> str:
    """Print ``e`` as text the parser accepts, with minimal parentheses."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return "-" + _wrap(e.child, _LEVEL_UNARY)
    if isinstance(e, Bin):
        if e.op in "+-":
            return _wrap(e.left, _LEVEL_ADD) + e.op + _wrap(e.right, _LEVEL_MUL)
        if e.op in "*/":
            return _wrap(e.left, _LEVEL_MUL) + e.op + _wrap(e.right, _LEVEL_POW)
        return _wrap(e.left, _LEVEL_UNARY) + "^" + _wrap(e.right, _LEVEL_POW)
    if isinstance(e, Call):
        return f"{e.fn}({unparse(e.arg)})"
    raise TypeError(f"not an Expr node: {e!r}")


# ---------------------------------------------------------------------------
# Differentiation


def _d(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Neg):
        return Neg(_d(e.child))
    if isinstance(e, Bin):
        u, v = e.left, e.right
        if e.op == "+" or e.op == "-":
            return Bin(e.op, _d(u), _d(v))
        if e.op == "*":
            return _d(u) * v + u * _d(v)
        if e.op == "/":
            return (_d(u) * v - u * _d(v)) / (v ** Const(2.0))
        # power: split on which side carries x
        if isinstance(v, Const):
            return Const(v.value) * u ** Const(v.value - 1.0) * _d(u)
        if isinstance(u, Const):
            return Bin("^", u, v) * Call("ln", u) * _d(v)
        return Bin("^", u, v) * (_d(v) * Call("ln", u) + v * _d(u) / u)
    if isinstance(e, Call):
        u = e.arg
        du = _d(u)
        f = e.fn
        if f == "sin":
            return Call("cos", u) * du
        if f == "cos":
            return Neg(Call("sin", u)) * du
        if f == "tan":
            return du / Call("cos", u) ** Const(2.0)
        if f == "asin":
            return du / Call("sqrt", Const(1.0) - u ** Const(2.0))
        if f == "acos":
            return Neg(du / Call("sqrt", Const(1.0) - u ** Const(2.0)))
        if f == "atan":
            return du / (Const(1.0) + u ** Const(2.0))
        if f == "exp":
            return Call("exp", u) * du
        if f == "ln":
            return du / u
        if f == "sqrt":
            return du / (Const(2.0) * Call("sqrt", u))
        if f == "abs":
            return Call("sgn", u) * du
        if f == "sgn":
            # the distributional point mass at sign changes is dropped;
            # callers detect those points separately
            return Const(0.0)
    raise TypeError(f"not an Expr node: {e!r}")


def differentiate(e: Expr, order: int = 1) -> Expr:
    """Symbolic derivative of the given order (simplified between orders)."""
    if not isinstance(order, int) or order < 1:
        raise ValueError(f"derivative order must be a positive integer, got {order!r}")
    out = e
    for _ in range(order):
        out = simplify(_d(out))
    return out


# ---------------------------------------------------------------------------
# Simplification


def _is_const(e: Expr, value: float | None = None) -> bool:
    if not isinstance(e, Const):
        return False
    return value is None or e.value == value


def _fold_bin(op: str, a: float, b: float) -> float:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return _div(a, b)
    return _pow(a, b)


def simplify(e: Expr) -> Expr:
    """Constant folding and identity elimination.

    The result is pointwise-equal to the input wherever the input is
    defined; folding never produces non-finite constants.
    """
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Neg):
        c = simplify(e.child)
        if isinstance(c, Const):
            return Const(-c.value)
        if isinstance(c, Neg):
            return c.child
        return Neg(c)
    if isinstance(e, Call):
        a = simplify(e.arg)
        if isinstance(a, Const):
            v = _FN_EVAL[e.fn](a.value)
            if math.isfinite(v):
                return Const(v)
        return Call(e.fn, a)
    if isinstance(e, Bin):
        l = simplify(e.left)
        r = simplify(e.right)
        op = e.op
        if isinstance(l, Const) and isinstance(r, Const):
            v = _fold_bin(op, l.value, r.value)
            if math.isfinite(v):
                return Const(v)
        if op == "+":
            if _is_const(l, 0.0):
                return r
            if _is_const(r, 0.0):
                return l
        elif op == "-":
            if _is_const(r, 0.0):
                return l
            if _is_const(l, 0.0):
                return Neg(r) if not isinstance(r, Const) else Const(-r.value)
            if l == r:
                return Const(0.0)
        elif op == "*":
            if _is_const(l, 0.0) or _is_const(r, 0.0):
                return Const(0.0)
            if _is_const(l, 1.0):
                return r
            if _is_const(r, 1.0):
                return l
            if isinstance(r, Const) and not isinstance(l, Const):
                l, r = r, l  # keep the constant coefficient on the left
            if isinstance(l, Const) and isinstance(r, Bin) and r.op == "*" \
                    and isinstance(r.left, Const):
                v = l.value * r.left.value
                if math.isfinite(v):
                    return Bin("*", Const(v), r.right)
            return Bin("*", l, r)
        elif op == "/":
            if _is_const(l, 0.0):
                return Const(0.0)
            if _is_const(r, 1.0):
                return l
            if l == r:
                return Const(1.0)
        elif op == "^":
            if _is_const(r, 1.0):
                return l
            if _is_const(r, 0.0):
                return Const(1.0)
            if _is_const(l, 1.0):
                return Const(1.0)
        return Bin(op, l, r)
    raise TypeError(f"not an Expr node: {e!r}")


# ---------------------------------------------------------------------------
# Structure utilities


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of the variable with ``replacement``."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Neg):
        return Neg(substitute(e.child, replacement))
    if isinstance(e, Bin):
        return Bin(e.op, substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, replacement))
    raise TypeError(f"not an Expr node: {e!r}")


def _walk(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Neg):
        yield from _walk(e.child)
    elif isinstance(e, Bin):
        yield from _walk(e.left)
        yield from _walk(e.right)
    elif isinstance(e, Call):
        yield from _walk(e.arg)


def sign_sensitive_args(e: Expr) -> list[Expr]:
    """Arguments of every abs()/sgn() node in ``e``.

    Where one of these changes sign, the function has a kink or jump that
    the symbolic derivative cannot see; smoothness scans check them.
    """
    out = []
    for node in _walk(e):
        if isinstance(node, Call) and node.fn in ("abs", "sgn"):
            out.append(node.arg)
    return out
