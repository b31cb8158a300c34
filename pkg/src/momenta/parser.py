"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := ['+' | '-'] term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*      # '/' only by a constant
    factor  := base ('^' INT)?
    base    := NUMBER | NAME | '(' expr ')' | ('+' | '-') factor

Numbers are integers, decimals or ``p/q`` written with the division operator.
Names may contain letters, digits, ``_`` and a trailing ``'``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import PolySyntaxError, UnknownVariable
from .polynomial import Poly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*'*)|(?P<op>[-+*/^()]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(message, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> Poly:
        tok = self.peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if tok[1] == "+" else result - rhs
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.factor()
                if tok[1] == "*":
                    result = result * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        self.fail("division only by a nonzero constant", tok)
                    result = result / rhs.constant_term()
            else:
                return result

    def factor(self) -> Poly:
        base = self.base()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.peek()
            if exp_tok[0] != "num" or not exp_tok[1].isdigit():
                self.fail("exponent must be a non-negative integer literal", exp_tok)
            self.take()
            base = base ** int(exp_tok[1])
        return base

    def base(self) -> Poly:
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return Poly.constant(self.variables, Fraction(value))
        if kind == "name":
            if value not in self.variables:
                raise UnknownVariable(value, pos)
            return Poly.var(self.variables, value)
        if kind == "op" and value == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                raise PolySyntaxError("expected ')'", close[2], self.text)
            return inner
        if kind == "op" and value in "+-":
            inner = self.factor()
            return -inner if value == "-" else inner
        if kind == "end":
            raise PolySyntaxError("unexpected end of expression", pos, self.text)
        raise PolySyntaxError(f"unexpected token {value!r}", pos, self.text)


def parse_poly(text: str, chart) -> Poly:
    """Parse ``text`` into a :class:`Poly` over the chart's coordinates.

    ``chart`` may be a :class:`~momenta.calculus.ChartDomain` or a plain
    sequence of variable names.
    """
    variables = getattr(chart, "coord_names", chart)
    return _Parser(str(text), variables).parse()
