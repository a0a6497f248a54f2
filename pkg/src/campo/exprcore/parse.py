"""Text grammar for exp-polynomials and the canonical printer.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" int)?          int := ["-"] digits | "(" ["-"] digits ")"
    atom   := digits | "i" | var | "exp" "(" expr ")" | "(" expr ")"
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .cnum import CNum
from .exppoly import ExpPoly
from .laurent import DEFAULT_VARS, LaurentPoly2, grlex_key
from .rational import RationalFn2

__all__ = ["parse", "ParseError", "parse_constant", "format_laurent", "format_rational", "format_exppoly", "exponent_sort_key"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Syntax or name error, carrying the character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, vars):
        self.text = text
        self.vars = tuple(vars)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value or t[0] == "num":
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2], self.text)
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def parse(self) -> ExpPoly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.term()
            e = e + r if op == "+" else e - r
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            r = self.unary()
            if tok[1] == "*":
                e = e * r
            else:
                if not r:
                    raise ParseError("division by zero", tok[2], self.text)
                if not r.is_invertible():
                    raise ParseError("division by a sum of exponential terms", tok[2], self.text)
                e = e / r
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            k = self.int_exponent()
            if k < 0 and not base.is_invertible():
                raise ParseError("negative power of a non-invertible expression", t[2], self.text)
            return base ** k
        return base

    def int_exponent(self) -> int:
        paren = False
        if self.peek()[1] == "(" and self.peek()[0] == "op":
            self.take()
            paren = True
        sign = 1
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            if self.take()[1] == "-":
                sign = -sign
        t = self.take()
        if t[0] != "num":
            raise ParseError("integer exponent expected", t[2], self.text)
        if paren:
            self.expect(")")
        return sign * int(t[1])

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return ExpPoly.const(int(val), self.vars)
        if kind == "name":
            if val == "exp" and self.peek()[1] == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                if not arg.is_laurent():
                    raise ParseError("exp argument must be a Laurent polynomial", pos, self.text)
                return ExpPoly.exp(arg.as_laurent())
            if val in self.vars:
                return ExpPoly.var(val, self.vars)
            if val == "i":
                return ExpPoly.const(CNum(0, 1), self.vars)
            raise ParseError(f"unknown identifier {val!r}", pos, self.text)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse(text: str, vars=DEFAULT_VARS) -> ExpPoly:
    """Parse ``text`` into a canonical ExpPoly over the variable pair ``vars``."""
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    return _Parser(text, vars).parse()


def parse_constant(text: str) -> CNum:
    e = parse(text, ("_c0", "_c1"))
    if not e.is_constant():
        raise ParseError("expected a constant", 0, text)
    return e.constant_value()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------
def _monomial(vars, i: int, j: int) -> str:
    parts = []
    for name, k in ((vars[0], i), (vars[1], j)):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _term(vars, e, c: CNum) -> str:
    mono = _monomial(vars, *e)
    if not mono:
        return c.to_expr()
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c.to_expr()}*{mono}"


def _join(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def format_laurent(p: LaurentPoly2) -> str:
    return _join([_term(p.vars, e, c) for e, c in p.sorted_terms()])


def format_rational(r: RationalFn2) -> str:
    if r.is_laurent():
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.den)})"


def exponent_sort_key(s: LaurentPoly2):
    if not s:
        return (0, ())
    return (1, tuple((grlex_key(e), e, c.re, c.im) for e, c in s.sorted_terms()))


def format_exppoly(e: ExpPoly) -> str:
    parts = []
    for c, s in e.terms():
        if not s:
            if c.is_laurent():
                parts.extend(_term(c.vars, t, v) for t, v in c.num.sorted_terms())
            else:
                parts.append(format_rational(c))
            continue
        ex = f"exp({format_laurent(s)})"
        if c == 1:
            parts.append(ex)
        elif c == -1:
            parts.append("-" + ex)
        elif c.is_laurent() and c.num.is_monomial():
            (t, v), = c.num.items()
            parts.append(f"{_term(c.vars, t, v)}*{ex}")
        else:
            parts.append(f"({format_rational(c)})*{ex}")
    return _join(parts)
