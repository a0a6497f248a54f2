"""Univariate Laurent polynomials in one named variable."""
from __future__ import annotations

from typing import Dict, Mapping

from .cnum import CNum, as_cnum
from .laurent import LaurentPoly2

__all__ = ["UniPoly"]


class UniPoly:
    """``sum c_k * z^k`` with integer (possibly negative) exponents ``k``."""

    __slots__ = ("var", "_coeffs")

    def __init__(self, coeffs: Mapping[int, object] | None = None, var: str = "z"):
        clean: Dict[int, CNum] = {}
        for k, c in (coeffs or {}).items():
            c = as_cnum(c)
            if c:
                clean[int(k)] = c
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_list(cls, coeffs, var: str = "z") -> "UniPoly":
        return cls({k: c for k, c in enumerate(coeffs)}, var)

    @classmethod
    def const(cls, c, var: str = "z") -> "UniPoly":
        return cls({0: c}, var)

    @classmethod
    def from_laurent(cls, p: LaurentPoly2, var: str | None = None) -> "UniPoly":
        """Read a LaurentPoly2 that only uses its first variable."""
        if any(j for (_, j) in p.terms):
            raise ValueError(f"expression depends on {p.vars[1]!r}")
        return cls({i: c for (i, _), c in p.items()}, var or p.vars[0])

    @property
    def coeffs(self) -> Dict[int, CNum]:
        return dict(self._coeffs)

    def coeff(self, k: int) -> CNum:
        return self._coeffs.get(k, CNum(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else -1

    def ord(self) -> int:
        """Lowest exponent present (order of vanishing at 0)."""
        if not self._coeffs:
            raise ValueError("ord of the zero polynomial is undefined")
        return min(self._coeffs)

    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self._coeffs)

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._coeffs)

    def __call__(self, z):
        """Evaluate at a number; exact for CNum/int/Fraction inputs."""
        if isinstance(z, (complex, float)):
            return sum(complex(c) * z ** k for k, c in self._coeffs.items()) + 0j
        z = as_cnum(z)
        out = CNum(0)
        for k, c in self._coeffs.items():
            out = out + c * z ** k
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly({k - 1: c * k for k, c in self._coeffs.items() if k}, self.var)

    def compose(self, z: LaurentPoly2):
        """``self(z)`` for a bivariate z; a RationalFn2 when negative powers of a non-monomial appear."""
        from .rational import RationalFn2

        vars = z.vars
        if all(k >= 0 for k in self._coeffs) or z.is_monomial():
            out = LaurentPoly2.zero(vars)
            ks = sorted(self._coeffs)
            if ks and ks[0] >= 0:
                power, at = LaurentPoly2.const(1, vars), 0
                for k in ks:
                    power = power * z ** (k - at) if k > at else power
                    at = k
                    out = out + power.scale(self._coeffs[k])
                return out
            for k, c in self._coeffs.items():
                out = out + (z ** k).scale(c)
            return out
        out = RationalFn2.zero(vars)
        zr = RationalFn2(z)
        for k, c in self._coeffs.items():
            out = out + (zr ** k).scale(c)
        return out

    def to_laurent(self, vars=("x", "y"), index: int = 0) -> LaurentPoly2:
        if index == 0:
            return LaurentPoly2({(k, 0): c for k, c in self._coeffs.items()}, vars)
        return LaurentPoly2({(0, k): c for k, c in self._coeffs.items()}, vars)

    def __add__(self, other):
        o = other if isinstance(other, UniPoly) else UniPoly.const(other, self.var)
        t = dict(self._coeffs)
        for k, c in o._coeffs.items():
            t[k] = t.get(k, CNum(0)) + c
        return UniPoly(t, self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly({k: -c for k, c in self._coeffs.items()}, self.var)

    def __sub__(self, other):
        o = other if isinstance(other, UniPoly) else UniPoly.const(other, self.var)
        return self + (-o)

    def __mul__(self, other):
        o = other if isinstance(other, UniPoly) else UniPoly.const(other, self.var)
        t: Dict[int, CNum] = {}
        for a, c in self._coeffs.items():
            for b, d in o._coeffs.items():
                t[a + b] = t.get(a + b, CNum(0)) + c * d
        return UniPoly(t, self.var)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._coeffs == other._coeffs
        try:
            c = as_cnum(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.coeff(0) == c

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        return f"UniPoly({self.to_expr()!r}, var={self.var!r})"

    def __str__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        from .parse import format_laurent

        return format_laurent(self.to_laurent((self.var, "_")))
