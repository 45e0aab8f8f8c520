"""A small arithmetic-expression language in one variable ``t``.

Grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'

so ``-t^2`` is ``-(t^2)`` and ``2^-1`` is allowed.  Parsing is precedence
climbing over a byte-offset token stream; errors carry the offset.
Evaluation is vectorized over numpy arrays of t.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": np.pi}

# binary operator -> (precedence, right associative)
BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (4, True)}
UNARY_PREC = 3


class ExpressionError(UsageError):
    def __init__(self, message, offset):
        super().__init__(f"syntax error at offset {offset}: {message}")
        self.offset = offset
        self.reason = message


# -- syntax tree ----------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


# -- tokenizer --------------------------------------------------------------------

_TOKEN = re.compile(rb"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # num | name | op | end
    text: str
    offset: int


def tokenize(source):
    data = source.encode("utf-8") if isinstance(source, str) else bytes(source)
    pos, out = 0, []
    while pos < len(data):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {data[pos:pos + 1].decode('utf-8', 'replace')!r}",
                                  pos)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group().decode("ascii"), pos))
        pos = m.end()
    out.append(Token("end", "", len(data)))
    return out


# -- parser -----------------------------------------------------------------------


class _Parser:
    def __init__(self, source):
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.tok
        if t.kind != "op" or t.text != text:
            raise ExpressionError(f"expected {text!r}", t.offset)
        return self.take()

    def expression(self, min_prec=1):
        lhs = self.prefix()
        while True:
            t = self.tok
            if t.kind != "op" or t.text not in BINARY:
                return lhs
            prec, right = BINARY[t.text]
            if prec < min_prec:
                return lhs
            self.take()
            # the right operand of ^ may carry its own unary minus
            rhs = self.expression(prec if right else prec + 1) if t.text != "^" else self.power_rhs()
            lhs = Bin(t.text, lhs, rhs)

    def power_rhs(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            return self.prefix()
        return self.expression(BINARY["^"][0])

    def prefix(self):
        t = self.tok
        if t.kind == "op" and t.text in "+-":
            self.take()
            arg = self.expression(UNARY_PREC)
            return Neg(arg) if t.text == "-" else arg
        return self.atom()

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return Num(float(t.text))
        if t.kind == "name":
            if t.text == "t":
                return Var()
            if t.text in CONSTANTS:
                return Const(t.text)
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return Call(t.text, arg)
            raise ExpressionError(f"unknown identifier {t.text!r}", t.offset)
        if t.kind == "op" and t.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise ExpressionError("expected expression", t.offset)

    def parse(self):
        tree = self.expression()
        if self.tok.kind != "end":
            raise ExpressionError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return tree


# -- evaluation, differentiation, printing ----------------------------------------


def _eval(node, t):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, t)
    if isinstance(node, Call):
        return FUNCTIONS[node.fn](_eval(node.arg, t))
    a, b = _eval(node.left, t), _eval(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return np.power(a, b)


def _is_num(node, value=None):
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a, b):
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return Bin("+", a, b)


def _sub(a, b):
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    return Bin("-", a, b)


def _mul(a, b):
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    return Bin("*", a, b)


def _div(a, b):
    if _is_num(a, 0.0):
        return Num(0.0)
    if _is_num(b, 1.0):
        return a
    return Bin("/", a, b)


def _neg(a):
    if _is_num(a, 0.0):
        return a
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _depends(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, (Neg, Call)):
        return _depends(node.arg)
    if isinstance(node, Bin):
        return _depends(node.left) or _depends(node.right)
    return False


def _diff(node):
    if isinstance(node, (Num, Const)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return _neg(_diff(node.arg))
    if isinstance(node, Call):
        g, dg = node.arg, _diff(node.arg)
        if node.fn == "sin":
            outer = Call("cos", g)
        elif node.fn == "cos":
            outer = _neg(Call("sin", g))
        elif node.fn == "tan":
            outer = _add(Num(1.0), Bin("^", Call("tan", g), Num(2.0)))
        elif node.fn == "exp":
            outer = Call("exp", g)
        elif node.fn == "log":
            outer = _div(Num(1.0), g)
        elif node.fn == "sqrt":
            outer = _div(Num(0.5), Call("sqrt", g))
        else:  # abs, away from zero
            outer = _div(g, Call("abs", g))
        return _mul(outer, dg)
    a, b = node.left, node.right
    da, db = _diff(a), _diff(b)
    if node.op == "+":
        return _add(da, db)
    if node.op == "-":
        return _sub(da, db)
    if node.op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if node.op == "/":
        return _div(_sub(_mul(da, b), _mul(a, db)), Bin("^", b, Num(2.0)))
    # power
    if not _depends(b):
        return _mul(_mul(b, Bin("^", a, _sub(b, Num(1.0)))), da)
    # a^b = exp(b log a)
    return _mul(node, _add(_mul(db, Call("log", a)), _mul(b, _div(da, a))))


def _source(node):
    if isinstance(node, Num):
        s = repr(node.value)
        return s if node.value >= 0 else f"({s})"
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_source(node.arg)})"
    if isinstance(node, Call):
        return f"{node.fn}({_source(node.arg)})"
    return f"({_source(node.left)} {node.op} {_source(node.right)})"


class Expression:
    """A parsed expression; call it with t (scalar or array)."""

    def __init__(self, tree, source=None):
        self.tree = tree
        self.source = source if source is not None else _source(tree)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            return np.asarray(_eval(self.tree, t), dtype=float) * np.ones_like(t)

    def diff(self):
        """Symbolic derivative in t."""
        return Expression(_diff(self.tree))

    def to_source(self):
        """Fully parenthesized text that parses back to the same tree."""
        return _source(self.tree)

    def __eq__(self, other):
        return isinstance(other, Expression) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f"Expression({self.source!r})"


def parse_expression(source):
    """Parse text into an :class:`Expression`; raises ExpressionError with the byte offset."""
    return Expression(_Parser(source).parse(), source)
