"""Expression language for parametric surfaces ``(xi1, xi2) -> R^3``.

Grammar::

    expr    := term (("+"|"-") term)* ;
    term    := factor (("*"|"/") factor)* ;
    factor  := ("-")? power ;
    power   := atom ("^" factor)? ;
    atom    := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;

Identifiers are the coordinates ``xi1``/``xi2``, the constants ``pi`` and
``e``, declared parameters, or one of the functions in
:data:`shellbend.jets.FUNCTIONS` (which must be followed by ``(``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Union

import numpy as np

from . import jets
from .errors import DomainError, GeometryError, OutsideParamDomain, ParseError, UnknownIdentifier
from .jets import Jet2

COORDINATES = ("xi1", "xi2")
CONSTANTS = {"pi": math.pi, "e": math.e}
RESERVED = frozenset(COORDINATES) | frozenset(CONSTANTS) | frozenset(jets.FUNCTIONS)


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Number:
    value: float
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Name:
    name: str
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False)


Node = Union[Number, Name, Unary, Binary, Call]


# --------------------------------------------------------------------------
# Tokenizer and parser

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", "op", "end"
    text: str
    start: int
    end: int


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    tokens.append(_Token("end", "", len(text), len(text)))
    return tokens


_ATOM_START = ("NUMBER", "IDENT", "'('")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _is_op(self, *ops):
        return self.tok.kind == "op" and self.tok.text in ops

    def _advance(self):
        t = self.tok
        self.i += 1
        return t

    def _fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.start, expected)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self._fail(("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self._is_op("+", "-"):
            op = self._advance().text
            right = self.term()
            node = Binary(op, node, right, (node.span[0], right.span[1]))
        return node

    def term(self):
        node = self.factor()
        while self._is_op("*", "/"):
            op = self._advance().text
            right = self.factor()
            node = Binary(op, node, right, (node.span[0], right.span[1]))
        return node

    def factor(self):
        if self._is_op("-"):
            start = self._advance().start
            operand = self.power()
            return Unary("-", operand, (start, operand.span[1]))
        return self.power()

    def power(self):
        base = self.atom()
        if self._is_op("^"):
            self._advance()
            exponent = self.factor()
            return Binary("^", base, exponent, (base.span[0], exponent.span[1]))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "number":
            self._advance()
            return Number(float(t.text), (t.start, t.end))
        if t.kind == "ident":
            self._advance()
            if t.text in jets.FUNCTIONS:
                if not self._is_op("("):
                    self._fail(("'('",))
                self._advance()
                arg = self.expr()
                if not self._is_op(")"):
                    self._fail(("')'",))
                close = self._advance()
                return Call(t.text, arg, (t.start, close.end))
            if self._is_op("("):
                raise UnknownIdentifier(t.text, (t.start, t.end))
            return Name(t.text, (t.start, t.end))
        if self._is_op("("):
            open_ = self._advance()
            node = self.expr()
            if not self._is_op(")"):
                self._fail(("')'",))
            close = self._advance()
            return _respan(node, (open_.start, close.end))
        self._fail(_ATOM_START)


def _respan(node, span):
    # parentheses widen the diagnostic span but never change the tree
    return type(node)(*[getattr(node, f) for f in node.__dataclass_fields__ if f != "span"], span=span)


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an AST; raises :class:`ParseError` on bad input."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, _ATOM_START)
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Tree utilities

def names(node):
    """Yield every :class:`Name` node in the tree."""
    if isinstance(node, Name):
        yield node
    elif isinstance(node, Unary):
        yield from names(node.operand)
    elif isinstance(node, Binary):
        yield from names(node.left)
        yield from names(node.right)
    elif isinstance(node, Call):
        yield from names(node.arg)


def validate(node, params=()):
    """Raise :class:`UnknownIdentifier` for the first unresolvable name."""
    allowed = set(COORDINATES) | set(CONSTANTS) | set(params)
    for n in names(node):
        if n.name not in allowed:
            raise UnknownIdentifier(n.name, n.span)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _fmt(node):
    """Return (text, precedence) with minimal parentheses."""
    if isinstance(node, Number):
        text = repr(float(node.value))
        return text, (3 if text.startswith("-") else 5)
    if isinstance(node, Name):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.func}({_fmt(node.arg)[0]})", 5
    if isinstance(node, Unary):
        return "-" + _wrap(node.operand, 4), 3
    prec = _PREC[node.op]
    if node.op == "^":
        return f"{_wrap(node.left, 5)}^{_wrap(node.right, 3)}", prec
    # left-associative: the right operand must bind strictly tighter
    left_min, right_min = (1, 2) if prec == 1 else (2, 3)
    return f"{_wrap(node.left, left_min)} {node.op} {_wrap(node.right, right_min)}", prec


def _wrap(node, min_prec):
    text, prec = _fmt(node)
    return text if prec >= min_prec else f"({text})"


def to_text(node: Node) -> str:
    """Pretty-print an AST back into the surface language."""
    return _fmt(node)[0]


def fold_constants(node, params=None):
    """Collapse subtrees that do not depend on ``xi1``/``xi2``.

    Parameters are folded too when ``params`` supplies their values.
    Subtrees whose evaluation raises are left unfolded so the error surfaces
    at evaluation time with its source span.
    """
    params = params or {}
    if isinstance(node, Number):
        return node
    if isinstance(node, Name):
        if node.name in CONSTANTS:
            return Number(CONSTANTS[node.name], node.span)
        if node.name in params:
            return Number(float(params[node.name]), node.span)
        return node
    if isinstance(node, Unary):
        inner = fold_constants(node.operand, params)
        if isinstance(inner, Number):
            return Number(-inner.value, node.span)
        return Unary(node.op, inner, node.span)
    if isinstance(node, Call):
        inner = fold_constants(node.arg, params)
        if isinstance(inner, Number):
            try:
                return Number(float(jets.apply(node.func, inner.value)), node.span)
            except GeometryError:
                pass
        return Call(node.func, inner, node.span)
    left = fold_constants(node.left, params)
    right = fold_constants(node.right, params)
    if isinstance(left, Number) and isinstance(right, Number):
        try:
            return Number(float(_binary(node.op, left.value, right.value)), node.span)
        except GeometryError:
            pass
    return Binary(node.op, left, right, node.span)


def _binary(op, a, b):
    if op == "+":
        return jets.add(a, b)
    if op == "-":
        return jets.sub(a, b)
    if op == "*":
        return jets.mul(a, b)
    if op == "/":
        return jets.div(a, b)
    return jets.power(a, b)


def evaluate(node, env: Mapping):
    """Evaluate ``node`` with names bound by ``env`` (to jets or numbers).

    Constant subtrees stay plain floats so "^" with a literal integer
    exponent takes the repeated-multiplication path.
    """
    try:
        if isinstance(node, Number):
            return node.value
        if isinstance(node, Name):
            if node.name in env:
                return env[node.name]
            if node.name in CONSTANTS:
                return CONSTANTS[node.name]
            raise UnknownIdentifier(node.name, node.span)
        if isinstance(node, Unary):
            return jets.neg(evaluate(node.operand, env))
        if isinstance(node, Call):
            return jets.apply(node.func, evaluate(node.arg, env))
        return _binary(node.op, evaluate(node.left, env), evaluate(node.right, env))
    except DomainError as exc:
        if exc.span is None:
            exc.span = node.span
        raise


# --------------------------------------------------------------------------
# Surfaces

@dataclass(frozen=True, eq=False)
class SurfaceExpr:
    """Three component expressions over a rectangular parameter domain."""

    components: tuple
    params: Mapping = field(default_factory=dict)
    domain: tuple = ((-1.0, 1.0), (-1.0, 1.0))
    label: str = ""

    def __post_init__(self):
        if len(self.components) != 3:
            raise ValueError("a surface needs exactly three components")
        (a1, b1), (a2, b2) = self.domain
        if not (b1 > a1 and b2 > a2):
            raise ValueError(f"parameter domain {self.domain} has no interior")
        for key in self.params:
            if key in RESERVED:
                raise ValueError(f"parameter name {key!r} is reserved")
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "params", MappingProxyType(
            {k: float(v) for k, v in self.params.items()}))
        object.__setattr__(self, "domain", ((float(a1), float(b1)), (float(a2), float(b2))))
        for comp in self.components:
            validate(comp, self.params)

    @classmethod
    def from_strings(cls, texts, params=None, domain=((-1.0, 1.0), (-1.0, 1.0)), label=""):
        return cls(tuple(parse_expr(t) for t in texts), dict(params or {}), domain, label)

    def texts(self):
        return tuple(to_text(c) for c in self.components)

    def same_trees(self, other):
        return (self.components == other.components and dict(self.params) == dict(other.params)
                and self.domain == other.domain)

    def contains(self, xi1, xi2, strict=False):
        (a1, b1), (a2, b2) = self.domain
        if strict:
            return (a1 < xi1) & (xi1 < b1) & (a2 < xi2) & (xi2 < b2)
        return (a1 <= xi1) & (xi1 <= b1) & (a2 <= xi2) & (xi2 <= b2)


def eval_surface(s: SurfaceExpr, xi1, xi2=None):
    """Evaluate the three components of ``s`` as jets.

    ``eval_surface(s, (x, y))`` evaluates one point; ``eval_surface(s, X, Y)``
    with arrays evaluates a batch.  Constant components come back as
    zero-derivative jets.
    """
    if xi2 is None:
        xi1, xi2 = xi1
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    inside = s.contains(xi1, xi2)
    if not np.all(inside):
        bad = np.flatnonzero(~inside)[0]
        pt = (float(xi1.reshape(-1)[bad]), float(xi2.reshape(-1)[bad]))
        raise OutsideParamDomain(f"point outside parameter domain {s.domain}", pt)
    if xi1.ndim == 0:
        xi1, xi2 = float(xi1), float(xi2)
    env = dict(s.params)
    env["xi1"] = jets.jet_var(1, xi1)
    env["xi2"] = jets.jet_var(2, xi2)
    out = []
    for comp in s.components:
        v = evaluate(comp, env)
        out.append(v if isinstance(v, Jet2) else Jet2.const(v))
    return tuple(out)
