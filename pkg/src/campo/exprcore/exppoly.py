"""Exp-polynomials: finite sums of rational functions times exponentials."""
from __future__ import annotations

import cmath
from typing import Dict, Iterable, Mapping, Tuple

from .cnum import CNum, as_cnum
from .laurent import DEFAULT_VARS, LaurentPoly2
from .rational import RationalFn2

__all__ = ["ExpPoly", "to_exppoly"]


class ExpPoly:
    """``sum_k coeff_k * exp(exponent_k)``.

    ``coeff_k`` are RationalFn2, ``exponent_k`` are pairwise distinct
    LaurentPoly2 (the plain rational part is the term with zero exponent).
    The class is closed under +, *, partial differentiation and
    substitution by rational maps that keep exponents Laurent.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, terms: Mapping[LaurentPoly2, RationalFn2] | Iterable[Tuple[RationalFn2, LaurentPoly2]] | None = None,
                 vars=DEFAULT_VARS):
        acc: Dict[LaurentPoly2, RationalFn2] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((s, c) for c, s in (terms or ()))
        for s, c in items:
            if not isinstance(c, RationalFn2):
                c = RationalFn2(c) if isinstance(c, LaurentPoly2) else RationalFn2.const(c, vars)
            if c.vars != tuple(vars) or s.vars != tuple(vars):
                raise ValueError("variable mismatch in ExpPoly term")
            prev = acc.get(s)
            acc[s] = c if prev is None else prev + c
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "_terms", {s: c for s, c in acc.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @classmethod
    def _raw(cls, terms, vars):
        obj = object.__new__(cls)
        object.__setattr__(obj, "vars", vars)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, c, vars=DEFAULT_VARS) -> "ExpPoly":
        return cls.from_rational(RationalFn2.const(c, vars))

    @classmethod
    def zero(cls, vars=DEFAULT_VARS) -> "ExpPoly":
        return cls._raw({}, tuple(vars))

    @classmethod
    def from_rational(cls, r) -> "ExpPoly":
        if isinstance(r, LaurentPoly2):
            r = RationalFn2(r)
        if not r:
            return cls.zero(r.vars)
        return cls._raw({LaurentPoly2.zero(r.vars): r}, r.vars)

    @classmethod
    def exp(cls, s: LaurentPoly2, coeff=None) -> "ExpPoly":
        c = RationalFn2.const(1, s.vars) if coeff is None else to_rational(coeff, s.vars)
        return cls({s: c}, s.vars)

    @classmethod
    def var(cls, name: str, vars=DEFAULT_VARS) -> "ExpPoly":
        return cls.from_rational(LaurentPoly2.var(name, tuple(vars)))

    # -- inspection ------------------------------------------------------
    def items(self):
        return self._terms.items()

    def terms(self):
        """(coeff, exponent) pairs in canonical order."""
        from .parse import exponent_sort_key

        return [(self._terms[s], s) for s in sorted(self._terms, key=exponent_sort_key)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_rational(self) -> bool:
        return all(not s for s in self._terms)

    def as_rational(self) -> RationalFn2:
        if not self._terms:
            return RationalFn2.zero(self.vars)
        if not self.is_rational():
            raise ValueError("expression contains exponential terms")
        return next(iter(self._terms.values()))

    def is_laurent(self) -> bool:
        return self.is_rational() and self.as_rational().is_laurent()

    def as_laurent(self) -> LaurentPoly2:
        return self.as_rational().as_laurent()

    def is_polynomial(self) -> bool:
        return self.is_rational() and self.as_rational().is_polynomial()

    def is_constant(self) -> bool:
        return self.is_rational() and self.as_rational().is_constant()

    def constant_value(self) -> CNum:
        return self.as_rational().constant_value()

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def uses(self, name: str) -> bool:
        return any(s.uses(name) or c.num.uses(name) or c.den.uses(name) for s, c in self._terms.items())

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, ExpPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (RationalFn2, LaurentPoly2)):
            if other.vars != self.vars:
                raise ValueError("variable mismatch")
            return ExpPoly.from_rational(other)
        try:
            return ExpPoly.const(as_cnum(other), self.vars)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = dict(self._terms)
        for s, c in o._terms.items():
            prev = t.get(s)
            n = c if prev is None else prev + c
            if n:
                t[s] = n
            else:
                t.pop(s, None)
        return ExpPoly._raw(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._raw({s: -c for s, c in self._terms.items()}, self.vars)

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
        t: Dict[LaurentPoly2, RationalFn2] = {}
        for s1, c1 in self._terms.items():
            for s2, c2 in o._terms.items():
                s = s1 + s2
                c = c1 * c2
                prev = t.get(s)
                t[s] = c if prev is None else prev + c
        return ExpPoly._raw({s: c for s, c in t.items() if c}, self.vars)

    __rmul__ = __mul__

    def is_invertible(self) -> bool:
        return len(self._terms) == 1

    def inverse(self) -> "ExpPoly":
        if len(self._terms) != 1:
            raise ZeroDivisionError("only single-term exp-polynomials are invertible in this class")
        (s, c), = self._terms.items()
        return ExpPoly._raw({-s: c.inverse()}, self.vars)

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
        out = ExpPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "ExpPoly":
        c = as_cnum(c)
        if not c:
            return ExpPoly.zero(self.vars)
        return ExpPoly._raw({s: v.scale(c) for s, v in self._terms.items()}, self.vars)

    def diff(self, name: str) -> "ExpPoly":
        out = ExpPoly.zero(self.vars)
        for s, c in self._terms.items():
            ds = s.diff(name)
            piece = c.diff(name)
            if ds:
                piece = piece + c * RationalFn2(ds, _normalized=True)
            if piece:
                out = out + ExpPoly._raw({s: piece}, self.vars)
        return out

    def rename(self, vars) -> "ExpPoly":
        vars = tuple(vars)
        return ExpPoly._raw(
            {s.rename(vars): RationalFn2(c.num.rename(vars), c.den.rename(vars), _normalized=True) for s, c in self._terms.items()},
            vars,
        )

    # -- evaluation ------------------------------------------------------
    def eval(self, a: complex, b: complex) -> complex:
        out = 0j
        for s, c in self._terms.items():
            v = c.eval(a, b)
            if s:
                v *= cmath.exp(s.eval(a, b))
            out += v
        return out

    def compile(self):
        """A fast numeric evaluator ``(x, y) -> complex``."""
        parts = []
        for s, c in self._terms.items():
            num = [(complex(v), i, j) for (i, j), v in c.num.items()]
            den = [(complex(v), i, j) for (i, j), v in c.den.items()]
            ex = [(complex(v), i, j) for (i, j), v in s.items()]
            parts.append((num, den, ex))

        def _poly(terms, x, y):
            return sum(v * x ** i * y ** j for v, i, j in terms)

        def f(x, y):
            out = 0j
            for num, den, ex in parts:
                v = _poly(num, x, y)
                if len(den) != 1 or den[0][1] or den[0][2]:
                    v /= _poly(den, x, y)
                if ex:
                    v *= cmath.exp(_poly(ex, x, y))
                out += v
            return out

        return f

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        o = other
        if not isinstance(other, ExpPoly):
            try:
                o = self._lift(other)
            except ValueError:
                return False
            if o is NotImplemented:
                return NotImplemented
        return self.vars == o.vars and self._terms == o._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"ExpPoly({self.to_expr()!r}, vars={self.vars})"

    def __str__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        from .parse import format_exppoly

        return format_exppoly(self)


def to_rational(x, vars=DEFAULT_VARS) -> RationalFn2:
    if isinstance(x, RationalFn2):
        return x
    if isinstance(x, LaurentPoly2):
        return RationalFn2(x)
    if isinstance(x, ExpPoly):
        return x.as_rational()
    return RationalFn2.const(as_cnum(x), vars)


def to_exppoly(x, vars=DEFAULT_VARS) -> ExpPoly:
    """Coerce strings, numbers, LaurentPoly2 and RationalFn2 to ExpPoly."""
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, str):
        from .parse import parse

        return parse(x, vars)
    if isinstance(x, (LaurentPoly2, RationalFn2)):
        return ExpPoly.from_rational(x)
    return ExpPoly.const(as_cnum(x), vars)
