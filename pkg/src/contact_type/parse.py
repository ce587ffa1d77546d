"""Recursive-descent parser for the polynomial text format.

Grammar (whitespace insignificant)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | 'i' | var | '(' expr ')'
    rational := int ('/' uint)?
    var      := 'z' uint | 'zb' uint

``zbk`` is the complex conjugate of ``zk``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .gaussian import GaussianRational
from .poly import Poly, RealPoly, unit_vector

_TOKEN = re.compile(r"\s*(?:(zb\d+|z\d+)|(\d+)|(i)|([-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class RealityError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), m.lastindex, start))
        pos = m.end()
    tokens.append(("", 0, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[0] != value:
            what = repr(tok[0]) if tok[0] else "end of input"
            raise ParseError(f"expected {value!r}, found {what}", self.text, tok[2])

    def parse(self) -> RealPoly:
        value = self.expr()
        tok = self.peek()
        if tok[1] != 0:
            raise ParseError(f"unexpected token {tok[0]!r}", self.text, tok[2])
        return value

    def expr(self) -> RealPoly:
        sign = 1
        if self.peek()[0] in "+-" and self.peek()[1] == 4:
            sign = -1 if self.take()[0] == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek()[0] in ("+", "-") and self.peek()[1] == 4:
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RealPoly:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> RealPoly:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[1] != 2:
                raise ParseError("exponent must be an unsigned integer", self.text, tok[2])
            base = base ** int(tok[0])
        return base

    def const(self, c) -> RealPoly:
        zero = (0,) * self.n
        return RealPoly._raw(self.n, {(zero, zero): GaussianRational.coerce(c)} if c else {})

    def base(self) -> RealPoly:
        tok = self.take()
        text, kind, pos = tok
        if kind == 2:
            num = int(text)
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take()
                if den_tok[1] != 2:
                    raise ParseError("denominator must be an unsigned integer", self.text, den_tok[2])
                den = int(den_tok[0])
                if den == 0:
                    raise ParseError("zero denominator", self.text, den_tok[2])
                return self.const(Fraction(num, den))
            return self.const(num)
        if kind == 3:
            return self.const(GaussianRational(0, 1))
        if kind == 1:
            conj = text.startswith("zb")
            k = int(text[2:] if conj else text[1:])
            if not 1 <= k <= self.n:
                raise ParseError(f"variable {text} out of range for n={self.n}", self.text, pos)
            zero = (0,) * self.n
            e = unit_vector(self.n, k - 1)
            key = (zero, e) if conj else (e, zero)
            return RealPoly._raw(self.n, {key: GaussianRational(1)})
        if text == "(":
            value = self.expr()
            self.expect(")")
            return value
        what = repr(text) if text else "end of input"
        raise ParseError(f"unexpected {what}", self.text, pos)


def parse_poly(text: str, n: int, real: bool = False):
    """Parse ``text`` in ``n`` variables.

    Returns a :class:`Poly` unless some ``zbk`` occurs, in which case a
    :class:`RealPoly` is returned.  With ``real=True`` the result is always a
    RealPoly and must satisfy the reality condition.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    value = _Parser(text, n).parse()
    if real:
        if not value.is_real():
            raise RealityError(f"not a real polynomial: {text!r}")
        return value
    if value.is_holomorphic():
        return value.to_holomorphic()
    return value


def parse_real(text: str, n: int) -> RealPoly:
    return parse_poly(text, n, real=True)
