"""A small arithmetic expression language for scalar data fields.

Grammar (standard precedence, ``^`` binds tightest and is
right-associative, then unary minus, then ``* /``, then ``+ -``)::

    expr   := term  (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | VAR | FUNC '(' expr {',' expr} ')' | '(' expr ')'

Variables: x, y and the polar aliases r, theta.  Functions: sin, cos,
exp, sqrt, abs (unary), min, max (binary).  Evaluation is vectorized
over point arrays; runtime domain violations (division by zero, sqrt of
a negative) raise located errors.  Symbolic x/y derivatives exist for
the smooth sub-language (no abs/min/max, constant exponents only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VARIABLES = ("x", "y", "r", "theta")
UNARY_FUNCS = ("sin", "cos", "exp", "sqrt", "abs")
BINARY_FUNCS = ("min", "max")


class ExpressionError(ValueError):
    """Syntax or name error, carrying the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class FieldEvalError(ValueError):
    """Runtime evaluation failure, carrying the operator position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (operator at position {pos})")
        self.pos = pos


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only '-'
    operand: object
    pos: int = 0


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    pos: int = 0


def _same(a, b):
    """Structural equality ignoring stored positions."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Num):
        return a.value == b.value
    if isinstance(a, Var):
        return a.name == b.name
    if isinstance(a, Unary):
        return a.op == b.op and _same(a.operand, b.operand)
    if isinstance(a, Bin):
        return a.op == b.op and _same(a.left, b.left) and _same(a.right, b.right)
    if isinstance(a, Call):
        return (
            a.func == b.func
            and len(a.args) == len(b.args)
            and all(_same(p, q) for p, q in zip(a.args, b.args))
        )
    return False


# -- tokenizer ----------------------------------------------------------------


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^(),":
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
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
                raise ExpressionError(f"malformed number '{text[i:j]}'", i) from None
            tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ExpressionError(f"unexpected character '{c}'", i)
    tokens.append(("end", None, n))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ExpressionError(f"expected '{kind}', found '{tok[1]}'", tok[2])
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected trailing input '{tok[1]}'", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, pos = self.next()
            node = Bin(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.next()
            node = Bin(op, node, self.factor(), pos)
        return node

    def factor(self):
        if self.peek()[0] == "-":
            _, _, pos = self.next()
            return Unary("-", self.factor(), pos)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.next()
            return Bin("^", base, self.factor(), pos)
        return base

    def atom(self):
        kind, value, pos = self.next()
        if kind == "num":
            return Num(value)
        if kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "name":
            if self.peek()[0] == "(":
                self.next()
                args = [self.expr()]
                while self.peek()[0] == ",":
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                if value in UNARY_FUNCS:
                    need = 1
                elif value in BINARY_FUNCS:
                    need = 2
                else:
                    raise ExpressionError(f"unknown function '{value}'", pos)
                if len(args) != need:
                    raise ExpressionError(
                        f"function '{value}' takes {need} argument(s), got {len(args)}",
                        pos,
                    )
                return Call(value, tuple(args), pos)
            if value in VARIABLES:
                return Var(value)
            raise ExpressionError(f"unknown identifier '{value}'", pos)
        raise ExpressionError(f"expected a value, found '{value}'", pos)


def parse(text: str):
    if not text or not text.strip():
        raise ExpressionError("empty expression", 0)
    return _Parser(text).parse()


# -- evaluation ---------------------------------------------------------------


def evaluate(node, points):
    """Evaluate at an (n, 2) array of points; returns an (n,) array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    env = {
        "x": pts[:, 0],
        "y": pts[:, 1],
        "r": np.hypot(pts[:, 0], pts[:, 1]),
        "theta": np.arctan2(pts[:, 1], pts[:, 0]),
    }
    out = _eval(node, env)
    return np.broadcast_to(np.asarray(out, dtype=float), (pts.shape[0],)).copy()


def _eval(node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Unary):
        return -_eval(node.operand, env)
    if isinstance(node, Bin):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise FieldEvalError("division by zero", node.pos)
            return a / b
        if node.op == "^":
            with np.errstate(invalid="ignore", divide="ignore"):
                out = np.power(a, b)
            if np.any(~np.isfinite(np.asarray(out, dtype=float))):
                raise FieldEvalError("power produced a non-finite value", node.pos)
            return out
    if isinstance(node, Call):
        args = [_eval(arg, env) for arg in node.args]
        if node.func == "sqrt":
            if np.any(np.asarray(args[0]) < 0.0):
                raise FieldEvalError("sqrt of a negative value", node.pos)
            return np.sqrt(args[0])
        fn = {
            "sin": np.sin,
            "cos": np.cos,
            "exp": np.exp,
            "abs": np.abs,
            "min": np.minimum,
            "max": np.maximum,
        }[node.func]
        return fn(*args)
    raise TypeError(f"not an expression node: {node!r}")


# -- printing -----------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, (Num, Var, Call)):
        return _PREC_ATOM
    if isinstance(node, Bin):
        return {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "^": _PREC_POW}[
            node.op
        ]
    if isinstance(node, Unary):
        return _PREC_UNARY
    raise TypeError(repr(node))


def pretty(node):
    """Render with minimal parentheses; reparsing gives back the same tree."""

    def render(n, min_prec):
        if isinstance(n, Num):
            v = n.value
            text = repr(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)
            return text
        if isinstance(n, Var):
            return n.name
        if isinstance(n, Call):
            return f"{n.func}({', '.join(render(a, _PREC_ADD) for a in n.args)})"
        if isinstance(n, Unary):
            body = render(n.operand, _PREC_POW)
            text = f"-{body}"
            return f"({text})" if _PREC_UNARY < min_prec else text
        if isinstance(n, Bin):
            p = _prec(n)
            if n.op == "^":
                text = f"{render(n.left, _PREC_ATOM)}^{render(n.right, _PREC_UNARY)}"
            else:
                text = (
                    f"{render(n.left, p)} {n.op} {render(n.right, p + 1)}"
                )
            return f"({text})" if p < min_prec else text
        raise TypeError(repr(n))

    return render(node, _PREC_ADD)


# -- symbolic differentiation (smooth sub-language) ----------------------------


def _num(v):
    return Num(float(v))


def _add(a, b):
    if isinstance(a, Num) and a.value == 0.0:
        return b
    if isinstance(b, Num) and b.value == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value + b.value)
    return Bin("+", a, b)


def _sub(a, b):
    if isinstance(b, Num) and b.value == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value - b.value)
    return Bin("-", a, b)


def _mul(a, b):
    if isinstance(a, Num):
        if a.value == 0.0:
            return _num(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Num):
        if b.value == 0.0:
            return _num(0.0)
        if b.value == 1.0:
            return a
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value * b.value)
    return Bin("*", a, b)


def _div(a, b):
    if isinstance(a, Num) and a.value == 0.0:
        return _num(0.0)
    if isinstance(b, Num) and b.value == 1.0:
        return a
    return Bin("/", a, b)


def _neg(a):
    if isinstance(a, Num):
        return _num(-a.value)
    return Unary("-", a)


def is_constant(node):
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Unary):
        return is_constant(node.operand)
    if isinstance(node, Bin):
        return is_constant(node.left) and is_constant(node.right)
    if isinstance(node, Call):
        return all(is_constant(a) for a in node.args)
    raise TypeError(repr(node))


def _const_value(node):
    return float(evaluate(node, np.zeros((1, 2)))[0])


def differentiate(node, var):
    """d(node)/d(var) for var in {'x', 'y'}; None when not smooth."""
    assert var in ("x", "y")
    try:
        return _diff(node, var)
    except _NotSmooth:
        return None


class _NotSmooth(Exception):
    pass


def _diff(node, var):
    if isinstance(node, Num):
        return _num(0.0)
    if isinstance(node, Var):
        if node.name == var:
            return _num(1.0)
        if node.name in ("x", "y"):
            return _num(0.0)
        r = Var("r")
        if node.name == "r":
            # dr/dx = x/r, dr/dy = y/r
            return _div(Var(var), r)
        if node.name == "theta":
            rr = _mul(r, r)
            return _div(_neg(Var("y")), rr) if var == "x" else _div(Var("x"), rr)
    if isinstance(node, Unary):
        return _neg(_diff(node.operand, var))
    if isinstance(node, Bin):
        a, b = node.left, node.right
        if node.op == "+":
            return _add(_diff(a, var), _diff(b, var))
        if node.op == "-":
            return _sub(_diff(a, var), _diff(b, var))
        if node.op == "*":
            return _add(_mul(_diff(a, var), b), _mul(a, _diff(b, var)))
        if node.op == "/":
            num = _sub(_mul(_diff(a, var), b), _mul(a, _diff(b, var)))
            return _div(num, _mul(b, b))
        if node.op == "^":
            if not is_constant(b):
                raise _NotSmooth  # general a^b needs log, outside the grammar
            p = _const_value(b)
            if p == 0.0:
                return _num(0.0)
            return _mul(_mul(_num(p), Bin("^", a, _num(p - 1.0))), _diff(a, var))
    if isinstance(node, Call):
        if node.func in ("abs", "min", "max"):
            raise _NotSmooth
        (arg,) = node.args
        inner = _diff(arg, var)
        if node.func == "sin":
            return _mul(Call("cos", (arg,)), inner)
        if node.func == "cos":
            return _neg(_mul(Call("sin", (arg,)), inner))
        if node.func == "exp":
            return _mul(node, inner)
        if node.func == "sqrt":
            return _div(inner, _mul(_num(2.0), node))
    raise TypeError(repr(node))
