"""Bivariate Laurent polynomials over the Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .cnum import _ZERO, CNum, as_cnum

__all__ = ["LaurentPoly2", "grlex_key", "DEFAULT_VARS"]

Exp = Tuple[int, int]
DEFAULT_VARS = ("x", "y")


def grlex_key(e: Exp):
    """Graded lexicographic key with the first variable largest."""
    return (e[0] + e[1], e[0])


class LaurentPoly2:
    """A finite sum of ``c * x^i * y^j`` with integer ``i, j``.

    The term map never stores zero coefficients.  Values are immutable; the
    arithmetic operators return new instances.  Mixing operands with different
    variable pairs raises ``ValueError``.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, object] | None = None, vars=DEFAULT_VARS):
        clean: Dict[Exp, CNum] = {}
        if terms:
            for e, c in terms.items():
                c = as_cnum(c)
                if c:
                    clean[(int(e[0]), int(e[1]))] = c
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly2 is immutable")

    @classmethod
    def _raw(cls, terms: Dict[Exp, CNum], vars) -> "LaurentPoly2":
        obj = object.__new__(cls)
        object.__setattr__(obj, "vars", vars)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, c, vars=DEFAULT_VARS) -> "LaurentPoly2":
        return cls({(0, 0): c}, vars)

    @classmethod
    def monomial(cls, i: int, j: int, c=1, vars=DEFAULT_VARS) -> "LaurentPoly2":
        return cls({(i, j): c}, vars)

    @classmethod
    def var(cls, name: str, vars=DEFAULT_VARS) -> "LaurentPoly2":
        idx = vars.index(name)
        return cls.monomial(1 - idx, idx, 1, vars)

    @classmethod
    def zero(cls, vars=DEFAULT_VARS) -> "LaurentPoly2":
        return cls._raw({}, tuple(vars))

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> Dict[Exp, CNum]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exp, CNum]]:
        return self._terms.items()

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coeff(self, i: int, j: int) -> CNum:
        return self._terms.get((i, j), CNum(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def constant_value(self) -> CNum:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.coeff(0, 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        return all(i >= 0 and j >= 0 for i, j in self._terms)

    def min_exponents(self) -> Exp:
        if not self._terms:
            return (0, 0)
        return (min(i for i, _ in self._terms), min(j for _, j in self._terms))

    def max_exponents(self) -> Exp:
        if not self._terms:
            return (0, 0)
        return (max(i for i, _ in self._terms), max(j for _, j in self._terms))

    def degree(self) -> int:
        """Total degree (largest ``i + j``); ``-1`` for zero."""
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def degree_in(self, name: str) -> int:
        idx = self.vars.index(name)
        if not self._terms:
            return -1
        return max(e[idx] for e in self._terms)

    def leading(self) -> Tuple[Exp, CNum]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    def leading_coeff(self) -> CNum:
        return self.leading()[1]

    def monic(self) -> "LaurentPoly2":
        if not self._terms:
            return self
        return self.scale(CNum(1) / self.leading_coeff())

    def uses(self, name: str) -> bool:
        idx = self.vars.index(name)
        return any(e[idx] for e in self._terms)

    # -- arithmetic ------------------------------------------------------
    def _check(self, other: "LaurentPoly2"):
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly2):
            self._check(other)
            return other
        try:
            return LaurentPoly2.const(as_cnum(other), self.vars)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = dict(self._terms)
        for e, c in o._terms.items():
            s = t.get(e)
            s = c if s is None else s + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return LaurentPoly2._raw(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2._raw({e: -c for e, c in self._terms.items()}, self.vars)

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
        mine, theirs = self._terms.items(), o._terms.items()
        if all(not c.im for _, c in mine) and all(not d.im for _, d in theirs):
            r: Dict[Exp, Fraction] = {}
            for (a, b), c in mine:
                cr = c.re
                for (p, q), d in theirs:
                    e = (a + p, b + q)
                    r[e] = r.get(e, 0) + cr * d.re
            return LaurentPoly2._raw({e: CNum._new(v, _ZERO) for e, v in r.items() if v}, self.vars)
        t: Dict[Exp, CNum] = {}
        for (a, b), c in mine:
            for (p, q), d in theirs:
                e = (a + p, b + q)
                s = t.get(e)
                s = c * d if s is None else s + c * d
                t[e] = s
        return LaurentPoly2._raw({e: c for e, c in t.items() if c}, self.vars)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly2":
        c = as_cnum(c)
        if not c:
            return LaurentPoly2.zero(self.vars)
        return LaurentPoly2._raw({e: v * c for e, v in self._terms.items()}, self.vars)

    def shift(self, i: int, j: int) -> "LaurentPoly2":
        """Multiply by the monomial ``x^i y^j``."""
        return LaurentPoly2._raw({(a + i, b + j): c for (a, b), c in self._terms.items()}, self.vars)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (i, j), c = next(iter(self._terms.items()))
            return LaurentPoly2._raw({(i * k, j * k): c ** k}, self.vars)
        out = LaurentPoly2.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, name: str) -> "LaurentPoly2":
        idx = self.vars.index(name)
        t = {}
        for e, c in self._terms.items():
            k = e[idx]
            if k:
                ne = (e[0] - 1, e[1]) if idx == 0 else (e[0], e[1] - 1)
                t[ne] = c * k
        return LaurentPoly2._raw(t, self.vars)

    def rename(self, vars) -> "LaurentPoly2":
        return LaurentPoly2._raw(dict(self._terms), tuple(vars))

    def swap(self) -> "LaurentPoly2":
        return LaurentPoly2._raw({(j, i): c for (i, j), c in self._terms.items()}, self.vars)

    # -- division --------------------------------------------------------
    def exact_div(self, other: "LaurentPoly2") -> "LaurentPoly2 | None":
        """Laurent quotient ``self / other`` if it exists, else ``None``."""
        self._check(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return self
        ea = self.min_exponents()
        eb = other.min_exponents()
        a = self.shift(-ea[0], -ea[1])
        b = other.shift(-eb[0], -eb[1])
        q = _poly_div_exact(a, b)
        if q is None:
            return None
        return q.shift(ea[0] - eb[0], ea[1] - eb[1])

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly2):
            q = self.exact_div(other)
            if q is None:
                raise ValueError("inexact Laurent division")
            return q
        return self.scale(CNum(1) / as_cnum(other))

    # -- evaluation ------------------------------------------------------
    def eval(self, a: complex, b: complex) -> complex:
        s = 0j
        for (i, j), c in self._terms.items():
            s += complex(c) * (a ** i) * (b ** j)
        return s

    def eval_exact(self, a, b) -> CNum:
        a, b = as_cnum(a), as_cnum(b)
        s = CNum(0)
        for (i, j), c in self._terms.items():
            s = s + c * a ** i * b ** j
        return s

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly2):
            return self.vars == other.vars and self._terms == other._terms
        try:
            c = as_cnum(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.coeff(0, 0) == c

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"LaurentPoly2({self.to_expr()!r}, vars={self.vars})"

    def __str__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        from .parse import format_laurent

        return format_laurent(self)


def _poly_div_exact(a: LaurentPoly2, b: LaurentPoly2):
    """Exact polynomial division (graded-lex), ``None`` when b does not divide a."""
    (bi, bj), bc = b.leading()
    inv = CNum(1) / bc
    q: Dict[Exp, CNum] = {}
    r = a
    while r:
        (ri, rj), rc = r.leading()
        di, dj = ri - bi, rj - bj
        if di < 0 or dj < 0:
            return None
        c = rc * inv
        q[(di, dj)] = c
        r = r - b.shift(di, dj).scale(c)
    return LaurentPoly2._raw(q, a.vars)
