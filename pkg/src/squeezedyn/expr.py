"""Arithmetic expressions in ``t`` for time-dependent potential coefficients.

Grammar (recursive descent)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 't' | func '(' expr ')' | '(' expr ')'
    func   := sin | cos | sinh | cosh | exp | sqrt

``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
is ``-(t^2)`` and ``2^3^2`` is ``2^9``.

>>> f = parse("0.5*cos(2*t)")
>>> f(0.0)
0.5
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import EvaluationError, ParseError

FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "sqrt": np.sqrt,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos), source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, _byte_offset(self.source, tok[2]), self.source)

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            if text == ")":
                raise self.error(f"unbalanced parentheses: expected ')' but found {found}")
            raise self.error(f"expected {text!r} but found {found}")
        return self.advance()

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[1] == ")":
                raise self.error("unbalanced parentheses: unexpected ')'")
            raise self.error(f"unexpected token {tok[1]!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.peek()
        kind, text, _ = tok
        if kind == "number":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if text == "t":
                return Var()
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise self.error(f"unknown identifier {text!r}", tok)
        if text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {text!r}")


def parse_tree(source: str) -> Node:
    """Parse ``source`` into an expression tree."""
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", 0, source if isinstance(source, str) else "")
    return _Parser(source).parse()


def to_source(node: Node) -> str:
    """Render a tree as text that parses back to an identical tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def _compile(node: Node) -> Callable:
    if isinstance(node, Num):
        value = float(node.value)
        return lambda t: value + 0.0 * t
    if isinstance(node, Var):
        return lambda t: t
    if isinstance(node, Neg):
        f = _compile(node.operand)
        return lambda t: -f(t)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.func]
        f = _compile(node.arg)
        return lambda t: fn(f(t))
    if isinstance(node, BinOp):
        left, right = _compile(node.left), _compile(node.right)
        if node.op == "+":
            return lambda t: left(t) + right(t)
        if node.op == "-":
            return lambda t: left(t) - right(t)
        if node.op == "*":
            return lambda t: left(t) * right(t)
        if node.op == "^":
            return lambda t: np.power(left(t), right(t))
        if node.op == "/":

            def divide(t):
                den = right(t)
                if np.any(np.asarray(den) == 0):
                    raise EvaluationError("division by zero", t)
                return left(t) / den

            return divide
    raise TypeError(f"not an expression node: {node!r}")


def _has_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _has_var(node.operand)
    if isinstance(node, Call):
        return _has_var(node.arg)
    return _has_var(node.left) or _has_var(node.right)


class CoefficientFn:
    """A compiled coefficient function of time.

    Calling it with a float returns a float; calling it with an array
    evaluates elementwise.
    """

    __slots__ = ("tree", "source", "_fn", "is_constant")

    def __init__(self, tree: Node, source: str | None = None):
        self.tree = tree
        self.source = source if source is not None else to_source(tree)
        self._fn = _compile(tree)
        self.is_constant = not _has_var(tree)

    @classmethod
    def constant(cls, value: float) -> "CoefficientFn":
        value = float(value)
        tree = Num(value) if value >= 0 else Neg(Num(-value))
        return cls(tree, repr(value))

    def __call__(self, t):
        with np.errstate(all="ignore"):
            out = self._fn(t)
        if np.ndim(out) == 0:
            return float(out)
        return out

    @property
    def constant_value(self) -> float:
        if not self.is_constant:
            raise ValueError(f"{self.source!r} depends on t")
        return self(0.0)

    def __repr__(self):
        return f"CoefficientFn({self.source!r})"

    def __eq__(self, other):
        return isinstance(other, CoefficientFn) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)


def parse(source: str) -> CoefficientFn:
    """Compile an expression in ``t`` into a :class:`CoefficientFn`."""
    return CoefficientFn(parse_tree(source), source)


def evaluate(fn: CoefficientFn, t):
    """Evaluate ``fn`` at ``t``; raises :class:`EvaluationError` on division by zero."""
    return fn(t)


def as_coefficient(value) -> CoefficientFn:
    """Coerce a number, expression string or CoefficientFn into a CoefficientFn."""
    if isinstance(value, CoefficientFn):
        return value
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, (int, float, np.floating, np.integer)):
        return CoefficientFn.constant(float(value))
    raise TypeError(f"cannot interpret {value!r} as a coefficient function")
