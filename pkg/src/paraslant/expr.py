"""Small arithmetic expression language for lambda fields and conformal factors.

Grammar, loosest binding first::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ("^" INTEGER)?
    atom  := NUMBER | VARIABLE | FUNC "(" expr ")" | "(" expr ")"

Variables are ``x1, x2, ...`` (ambient coordinates) and ``u1, u2, ...``
(surface parameters). Functions: sin, cos, exp, sqrt, abs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt, "abs": np.abs}
_VAR = re.compile(r"[xu][1-9]\d*\Z")
_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      |(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
      |(?P<ident>[A-Za-z_]\w*)
      |(?P<op>[-+*/^(),])""",
    re.VERBOSE,
)


class ExprError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message, self.line, self.col = message, line, col


class ExprSyntaxError(ExprError):
    pass


class ExprEvalError(ExprError):
    pass


Pos = tuple[int, int]


@dataclass(frozen=True)
class Node:
    def evaluate(self, env: dict):
        raise NotImplementedError

    def __str__(self) -> str:
        return print_expr(self)


@dataclass(frozen=True)
class Num(Node):
    value: float
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        return self.value


@dataclass(frozen=True)
class Var(Node):
    name: str
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise ExprEvalError(f"variable {self.name!r} is not bound", *self.pos) from None


@dataclass(frozen=True)
class Neg(Node):
    operand: Node
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        return -self.operand.evaluate(env)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if np.any(np.asarray(b) == 0):
            raise ExprEvalError("division by zero", *self.pos)
        return a / b


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        return self.base.evaluate(env) ** self.exponent


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node
    pos: Pos = field(default=(1, 1), compare=False, repr=False)

    def evaluate(self, env):
        a = self.arg.evaluate(env)
        if self.func == "sqrt" and np.any(np.asarray(a) < 0):
            raise ExprEvalError("sqrt of a negative number", *self.pos)
        return FUNCTIONS[self.func](a)


# --- parsing ------------------------------------------------------------------------


def _line_col(src: str, idx: int) -> Pos:
    line = src.count("\n", 0, idx) + 1
    return line, idx - (src.rfind("\n", 0, idx) + 1) + 1


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks: list[tuple[str, str, int]] = []
        i = 0
        while i < len(src):
            m = _TOKEN.match(src, i)
            if m is None:
                raise ExprSyntaxError(f"unexpected character {src[i]!r}", *_line_col(src, i))
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), i))
            i = m.end()
        self.toks.append(("eof", "", len(src)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def pos(self, tok) -> Pos:
        return _line_col(self.src, tok[2])

    def fail(self, msg, tok):
        raise ExprSyntaxError(msg, *self.pos(tok))

    def expect(self, text):
        tok = self.take()
        if tok[1] != text:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            self.fail(f"expected {text!r}, found {what}", tok)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            tok = self.take()
            node = BinOp(tok[1], node, self.term(), self.pos(tok))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            tok = self.take()
            node = BinOp(tok[1], node, self.unary(), self.pos(tok))
        return node

    def unary(self):
        if self.peek()[1] == "-":
            tok = self.take()
            return Neg(self.unary(), self.pos(tok))
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            tok = self.take()
            exp = self.take()
            if exp[0] != "num" or not exp[1].isdigit():
                self.fail("exponent must be a non-negative integer literal", exp)
            node = Pow(node, int(exp[1]), self.pos(tok))
            if self.peek()[1] == "^":
                self.fail("chained powers need parentheses", self.peek())
        return node

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            return Num(float(text), self.pos(tok))
        if kind == "ident":
            if text in FUNCTIONS:
                if self.peek()[1] != "(":
                    self.fail(f"function {text!r} needs an argument list", self.peek())
                self.take()
                if self.peek()[1] == ")":
                    self.fail(f"function {text!r} takes 1 argument, got 0", self.peek())
                arg = self.expr()
                if self.peek()[1] == ",":
                    self.fail(f"function {text!r} takes 1 argument", self.peek())
                self.expect(")")
                return Call(text, arg, self.pos(tok))
            if _VAR.match(text):
                return Var(text, self.pos(tok))
            self.fail(f"unknown identifier {text!r}", tok)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail("unexpected end of input" if kind == "eof" else f"unexpected {text!r}", tok)


def parse_expr(src: str) -> Node:
    return _Parser(src).parse()


# --- printing -----------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def print_expr(node: Node) -> str:
    """Source text that parses back to an equal tree."""

    def wrap(child, ok):
        text = print_expr(child)
        return text if ok else f"({text})"

    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({print_expr(node.arg)})"
    if isinstance(node, Pow):
        return f"{wrap(node.base, _prec(node.base) == 5)}^{node.exponent}"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, _prec(node.operand) >= 3)
    p = _PREC[node.op]
    return f"{wrap(node.left, _prec(node.left) >= p)} {node.op} {wrap(node.right, _prec(node.right) > p)}"


# --- differentiation ----------------------------------------------------------------


def _add(a, b):
    if a == Num(0.0):
        return b
    if b == Num(0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if b == Num(0.0):
        return a
    if a == Num(0.0):
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if a == Num(0.0) or b == Num(0.0):
        return Num(0.0)
    if a == Num(1.0):
        return b
    if b == Num(1.0):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if a == Num(0.0):
        return Num(0.0)
    return BinOp("/", a, b)


def diff(node: Node, var: str) -> Node:
    """Symbolic partial derivative of ``node`` in ``var``."""
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0 if node.name == var else 0.0)
    if isinstance(node, Neg):
        d = diff(node.operand, var)
        return Num(0.0) if d == Num(0.0) else Neg(d)
    if isinstance(node, BinOp):
        a, b = node.left, node.right
        da, db = diff(a, var), diff(b, var)
        if node.op == "+":
            return _add(da, db)
        if node.op == "-":
            return _sub(da, db)
        if node.op == "*":
            return _add(_mul(da, b), _mul(a, db))
        return _div(_sub(_mul(da, b), _mul(a, db)), Pow(b, 2))
    if isinstance(node, Pow):
        n = node.exponent
        if n == 0:
            return Num(0.0)
        inner = Num(1.0) if n == 1 else (node.base if n == 2 else Pow(node.base, n - 1))
        return _mul(_mul(Num(float(n)), inner), diff(node.base, var))
    if isinstance(node, Call):
        a = node.arg
        da = diff(a, var)
        if da == Num(0.0):
            return Num(0.0)
        outer = {
            "sin": lambda: Call("cos", a),
            "cos": lambda: Neg(Call("sin", a)),
            "exp": lambda: Call("exp", a),
            "sqrt": lambda: _div(Num(1.0), _mul(Num(2.0), Call("sqrt", a))),
            "abs": lambda: _div(a, Call("abs", a)),
        }[node.func]()
        return _mul(outer, da)
    raise TypeError(f"cannot differentiate {node!r}")


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables(node.operand if isinstance(node, Neg) else node.arg)
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)


def coord_env(x, prefix: str = "x") -> dict:
    """Bind x1..xn (or u1..un) to the components of ``x``; arrays broadcast."""
    x = np.asarray(x, dtype=float)
    return {f"{prefix}{i + 1}": x[i] for i in range(x.shape[0])}


class ScalarField:
    """An expression in x1..xn usable as a scalar field with an analytic gradient."""

    def __init__(self, src: str | Node, dim: int = 4, prefix: str = "x"):
        self.ast = parse_expr(src) if isinstance(src, str) else src
        self.dim, self.prefix = dim, prefix
        self.source = print_expr(self.ast)
        names = {f"{prefix}{i + 1}" for i in range(dim)}
        bad = variables(self.ast) - names
        if bad:
            name = sorted(bad)[0]
            raise ExprEvalError(f"variable {name!r} is not available here", 1, 1)
        self._grad = [diff(self.ast, f"{prefix}{i + 1}") for i in range(dim)]

    def __call__(self, x):
        return float(self.ast.evaluate(coord_env(x, self.prefix)))

    def evaluate_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over rows of ``pts``."""
        pts = np.asarray(pts, dtype=float)
        val = self.ast.evaluate(coord_env(pts.T, self.prefix))
        return np.broadcast_to(np.asarray(val, dtype=float), (pts.shape[0],)).copy()

    def gradient(self, x) -> np.ndarray:
        env = coord_env(x, self.prefix)
        return np.array([float(d.evaluate(env)) for d in self._grad])

    def __repr__(self) -> str:
        return f"ScalarField({self.source!r})"
