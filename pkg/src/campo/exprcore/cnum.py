"""Exact Gaussian-rational scalars."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["CNum", "as_cnum", "Rat"]

Rat = Fraction
_ZERO = Fraction(0)


class CNum:
    """An exact complex number ``re + im*i`` with rational parts.

    Instances are immutable and hashable.  Integers and fractions compare
    equal to the corresponding real CNum.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def _new(cls, re: Fraction, im: Fraction) -> "CNum":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CNum is immutable")

    # -- construction helpers -------------------------------------------
    @classmethod
    def i(cls) -> "CNum":
        return cls(0, 1)

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return CNum._new(self.re + o.re, self.im + o.im if self.im or o.im else _ZERO)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return CNum._new(self.re - o.re, self.im - o.im if self.im or o.im else _ZERO)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if not self.im and not o.im:
            return CNum._new(self.re * o.re, _ZERO)
        return CNum._new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if not d:
            raise ZeroDivisionError("division by zero CNum")
        return CNum((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return CNum._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("CNum powers must be integers")
        if k < 0:
            return CNum(1) / (self ** -k)
        out = CNum(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CNum":
        return CNum(self.re, -self.im)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- printing --------------------------------------------------------
    def __repr__(self):
        return f"CNum({self.re!s}, {self.im!s})"

    def __str__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        """Grammar-compatible text; compound values are parenthesised."""
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        im = abs(self.im)
        sign = "+" if self.im > 0 else "-"
        imtxt = "i" if im == 1 else f"{im}*i"
        return f"({self.re}{sign}{imtxt})"


def _coerce(x):
    if isinstance(x, CNum):
        return x
    if isinstance(x, (int, Rational)):
        return CNum(x)
    return NotImplemented


def as_cnum(x) -> CNum:
    """Coerce ints, Fractions, CNum and exact-valued complex numbers."""
    if isinstance(x, CNum):
        return x
    if isinstance(x, bool):
        return CNum(int(x))
    if isinstance(x, (int, Rational)):
        return CNum(x)
    if isinstance(x, str):
        from .parse import parse_constant

        return parse_constant(x)
    if isinstance(x, complex):
        re, im = x.real, x.imag
        if float(re).is_integer() and float(im).is_integer():
            return CNum(int(re), int(im))
    raise TypeError(f"cannot represent {x!r} exactly as a Gaussian rational")
