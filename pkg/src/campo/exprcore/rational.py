"""Normalized bivariate rational functions."""
from __future__ import annotations

from .cnum import CNum, as_cnum
from .gcd import poly_gcd
from .laurent import DEFAULT_VARS, LaurentPoly2

__all__ = ["RationalFn2"]


class RationalFn2:
    """``num / den`` kept in a canonical form.

    Monomials are units, so they are always moved into the numerator: the
    stored denominator is a polynomial not divisible by either variable, is
    coprime to the numerator, and has leading coefficient 1 in graded-lex
    order.  Two equal rational functions therefore have identical fields.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, _normalized=False):
        if not isinstance(num, LaurentPoly2):
            vars = den.vars if isinstance(den, LaurentPoly2) else DEFAULT_VARS
            num = LaurentPoly2.const(as_cnum(num), vars)
        if den is None:
            den = LaurentPoly2.const(1, num.vars)
        elif not isinstance(den, LaurentPoly2):
            den = LaurentPoly2.const(as_cnum(den), num.vars)
        if num.vars != den.vars:
            raise ValueError("variable mismatch")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn2 is immutable")

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def const(cls, c, vars=DEFAULT_VARS):
        return cls(LaurentPoly2.const(c, vars))

    @classmethod
    def zero(cls, vars=DEFAULT_VARS):
        return cls(LaurentPoly2.zero(vars))

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.is_laurent() and self.num.is_polynomial()

    def is_constant(self) -> bool:
        return self.is_laurent() and self.num.is_constant()

    def constant_value(self) -> CNum:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0, 0)

    def as_laurent(self) -> LaurentPoly2:
        if not self.is_laurent():
            raise ValueError("rational function has a non-monomial denominator")
        return self.num

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, RationalFn2):
            if other.vars != self.vars:
                raise ValueError("variable mismatch")
            return other
        if isinstance(other, LaurentPoly2):
            if other.vars != self.vars:
                raise ValueError("variable mismatch")
            return RationalFn2(other, _normalized=True)
        try:
            return RationalFn2.const(as_cnum(other), self.vars)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFn2(self.num + o.num, self.den)
        return RationalFn2(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn2(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.is_laurent() and o.is_laurent():
            return RationalFn2(self.num * o.num, _normalized=True)
        return RationalFn2(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn2":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn2(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFn2(self.num ** k, self.den ** k, _normalized=True)

    def scale(self, c) -> "RationalFn2":
        return RationalFn2(self.num.scale(c), self.den, _normalized=True) if as_cnum(c) else RationalFn2.zero(self.vars)

    def diff(self, name: str) -> "RationalFn2":
        if self.is_laurent():
            return RationalFn2(self.num.diff(name), _normalized=True)
        n, d = self.num, self.den
        return RationalFn2(n.diff(name) * d - n * d.diff(name), d * d)

    # -- evaluation ------------------------------------------------------
    def eval(self, a: complex, b: complex) -> complex:
        return self.num.eval(a, b) / self.den.eval(a, b)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RationalFn2):
            return self.num == other.num and self.den == other.den
        if isinstance(other, LaurentPoly2):
            return self.is_laurent() and self.num == other
        try:
            c = as_cnum(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.num.coeff(0, 0) == c

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"RationalFn2({self.to_expr()!r})"

    def __str__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        from .parse import format_rational

        return format_rational(self)


def _normalize(num: LaurentPoly2, den: LaurentPoly2):
    # move the monomial content of den into num
    e = den.min_exponents()
    if e != (0, 0):
        den = den.shift(-e[0], -e[1])
        num = num.shift(-e[0], -e[1])
    if not num:
        return LaurentPoly2.zero(num.vars), LaurentPoly2.const(1, num.vars)
    if den.is_constant():
        c = den.constant_value()
        if c != 1:
            num = num.scale(CNum(1) / c)
            den = LaurentPoly2.const(1, num.vars)
        return num, den
    en = num.min_exponents()
    g = poly_gcd(num.shift(-en[0], -en[1]), den)
    if not g.is_constant():
        num = num.exact_div(g)
        den = den.exact_div(g)
    lc = den.leading_coeff()
    if lc != 1:
        inv = CNum(1) / lc
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den
