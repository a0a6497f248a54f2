"""Planar vector fields, Lie derivatives, invariant curves and pullbacks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Tuple

from .exprcore import (
    CNum, ExpPoly, LaurentPoly2, RationalFn2, UniPoly, divides, gcd2, parse, poly_quotient, substitute, to_exppoly,
)
from .exprcore.subst import SubstitutionError

__all__ = [
    "PlanarField", "PolyMap", "HMap", "FieldError", "lie", "bracket", "has_isolated_singularities",
    "invariant_cofactor", "is_invariant_curve", "pullback_automorphism", "pullback_H", "pushforward_H",
    "parse_field",
]


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarField:
    """``P d/dx + Q d/dy`` with ExpPoly components."""

    P: ExpPoly
    Q: ExpPoly
    vars: Tuple[str, str] = ("x", "y")

    def __post_init__(self):
        vars = tuple(self.vars)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "P", to_exppoly(self.P, vars))
        object.__setattr__(self, "Q", to_exppoly(self.Q, vars))
        if self.P.vars != vars or self.Q.vars != vars:
            raise FieldError("components must share the field's variable pair")

    @classmethod
    def of(cls, P, Q, vars=("x", "y")) -> "PlanarField":
        return cls(to_exppoly(P, vars), to_exppoly(Q, vars), tuple(vars))

    @classmethod
    def zero(cls, vars=("x", "y")) -> "PlanarField":
        return cls(ExpPoly.zero(vars), ExpPoly.zero(vars), tuple(vars))

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero()

    def is_polynomial(self) -> bool:
        return self.P.is_polynomial() and self.Q.is_polynomial()

    def is_laurent(self) -> bool:
        return self.P.is_laurent() and self.Q.is_laurent()

    def polynomial_components(self) -> Tuple[LaurentPoly2, LaurentPoly2]:
        if not self.is_polynomial():
            raise FieldError("field components are not polynomials")
        return self.P.as_laurent(), self.Q.as_laurent()

    def degree(self) -> int:
        P, Q = self.polynomial_components()
        return max(P.degree(), Q.degree())

    def scale(self, g) -> "PlanarField":
        g = to_exppoly(g, self.vars)
        return PlanarField(self.P * g, self.Q * g, self.vars)

    __rmul__ = scale

    def __mul__(self, g):
        return self.scale(g)

    def __add__(self, other: "PlanarField") -> "PlanarField":
        return PlanarField(self.P + other.P, self.Q + other.Q, self.vars)

    def __sub__(self, other: "PlanarField") -> "PlanarField":
        return PlanarField(self.P - other.P, self.Q - other.Q, self.vars)

    def __neg__(self):
        return PlanarField(-self.P, -self.Q, self.vars)

    def evaluator(self):
        p, q = self.P.compile(), self.Q.compile()
        return lambda x, y: (p(x, y), q(x, y))

    def to_text(self) -> str:
        return f"{self.vars[0]}:{self.P.to_expr()}, {self.vars[1]}:{self.Q.to_expr()}"

    def __str__(self):
        return f"({self.P.to_expr()})*d/d{self.vars[0]} + ({self.Q.to_expr()})*d/d{self.vars[1]}"

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "P": self.P.to_expr(), "Q": self.Q.to_expr()}

    @classmethod
    def from_json(cls, data) -> "PlanarField":
        if isinstance(data, str):
            data = json.loads(data)
        vars = tuple(data.get("vars", ("x", "y")))
        if len(vars) != 2:
            raise FieldError("'vars' must name exactly two variables")
        return cls(parse(data["P"], vars), parse(data["Q"], vars), vars)


def parse_field(text: str, vars=("x", "y")) -> PlanarField:
    """Read the shorthand ``"x:<expr>, y:<expr>"``."""
    comps = {}
    for chunk in text.split(","):
        if ":" not in chunk:
            raise FieldError(f"component {chunk.strip()!r} lacks '<var>:'")
        name, expr = chunk.split(":", 1)
        name = name.strip()
        if name not in vars:
            raise FieldError(f"unknown component variable {name!r}")
        if name in comps:
            raise FieldError(f"component {name!r} given twice")
        comps[name] = parse(expr, vars)
    zero = ExpPoly.zero(vars)
    return PlanarField(comps.get(vars[0], zero), comps.get(vars[1], zero), tuple(vars))


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------
def lie(X: PlanarField, f) -> ExpPoly:
    """``X(f) = P df/dx + Q df/dy``."""
    f = to_exppoly(f, X.vars)
    if f.vars != X.vars:
        raise FieldError("function and field use different variables")
    x, y = X.vars
    return X.P * f.diff(x) + X.Q * f.diff(y)


def bracket(X: PlanarField, Y: PlanarField) -> PlanarField:
    x, y = X.vars
    return PlanarField(lie(X, Y.P) - lie(Y, X.P), lie(X, Y.Q) - lie(Y, X.Q), X.vars)


def has_isolated_singularities(Y: PlanarField) -> bool:
    """True iff the polynomial components have a constant gcd."""
    if Y.is_zero():
        raise FieldError("the zero field has no isolated singularities")
    P, Q = Y.polynomial_components()
    if not P.is_polynomial() or not Q.is_polynomial():
        raise FieldError("components must be polynomials")
    return gcd2(P, Q).is_constant()


def _as_poly(h, vars) -> LaurentPoly2:
    if isinstance(h, LaurentPoly2):
        return h
    return to_exppoly(h, vars).as_laurent()


def invariant_cofactor(Y: PlanarField, h) -> Optional[LaurentPoly2]:
    """The polynomial k with ``Y(h) = k*h``, or None if {h=0} is not invariant."""
    h = _as_poly(h, Y.vars)
    if h.is_constant():
        raise FieldError("invariance of a constant is meaningless")
    Yh = lie(Y, h)
    if not Yh.is_laurent():
        return None
    return poly_quotient(h, Yh.as_laurent())


def is_invariant_curve(Y: PlanarField, h) -> bool:
    return invariant_cofactor(Y, h) is not None


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------
def _rat(e, vars) -> RationalFn2:
    if isinstance(e, RationalFn2):
        return e
    if isinstance(e, LaurentPoly2):
        return RationalFn2(e)
    return to_exppoly(e, vars).as_rational()


@dataclass(frozen=True)
class PolyMap:
    """``(x, y) -> (forward[0], forward[1])`` with a caller-supplied inverse.

    Components may be rational (e.g. ``(1/x, 1/y)``); conjugacy is then only
    claimed off the poles of the map.  The inverse is verified exactly at
    construction.
    """

    forward: Tuple[RationalFn2, RationalFn2]
    inverse: Optional[Tuple[RationalFn2, RationalFn2]] = None
    vars: Tuple[str, str] = ("x", "y")

    def __post_init__(self):
        vars = tuple(self.vars)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "forward", tuple(_rat(e, vars) for e in self.forward))
        if self.inverse is not None:
            object.__setattr__(self, "inverse", tuple(_rat(e, vars) for e in self.inverse))

    def verify(self) -> bool:
        if self.inverse is None:
            return False
        x, y = self.vars
        ident = (RationalFn2(LaurentPoly2.var(x, self.vars)), RationalFn2(LaurentPoly2.var(y, self.vars)))
        fwd = dict(zip(self.vars, self.forward))
        inv = dict(zip(self.vars, self.inverse))
        fi = tuple(substitute(e, inv) for e in self.forward)
        if_ = tuple(substitute(e, fwd) for e in self.inverse)
        return fi == ident and if_ == ident


def pullback_automorphism(X: PlanarField, phi: PolyMap) -> PlanarField:
    """``phi^* X``: the field whose image under phi is X.

    Computed as ``(X(psi_1) o phi, X(psi_2) o phi)`` with psi the inverse,
    which equals ``Dphi^{-1} (X o phi)``.
    """
    if phi.inverse is None:
        raise FieldError("pullback needs the inverse map")
    if not phi.verify():
        raise FieldError("supplied inverse does not invert the map")
    if phi.vars != X.vars:
        raise FieldError("map and field use different variables")
    fwd = dict(zip(X.vars, phi.forward))
    comps = [substitute(lie(X, ExpPoly.from_rational(psi)), fwd) for psi in phi.inverse]
    return PlanarField(comps[0], comps[1], X.vars)


# ---------------------------------------------------------------------------
# the rational map H
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class HMap:
    """``(u, v) -> (x, y) = (u^n, u^{-(m + n l)} (v - u^m p(u^n)))``.

    Composed with ``R = x^m (x^l y + p(x))^n`` it gives ``R o H = v^n``.
    """

    m: int
    n: int
    l: int = 0
    p: UniPoly = field(default_factory=lambda: UniPoly({}, "x"))

    def __post_init__(self):
        p = self.p
        if isinstance(p, str):
            p = UniPoly.from_laurent(parse(p, ("x", "_")).as_laurent(), "x")
        elif not isinstance(p, UniPoly):
            p = UniPoly.const(p, "x") if p else UniPoly({}, "x")
        object.__setattr__(self, "p", p)
        if self.m < 1:
            raise FieldError("H: m must be a positive integer")
        if self.n == 0:
            raise FieldError("H: n must be nonzero")
        if gcd(self.m, abs(self.n)) != 1:
            raise FieldError("H: coprimality gcd(m, |n|) = 1 violated")
        if self.l < 0:
            raise FieldError("H: l must be nonnegative")
        if not p.is_polynomial():
            raise FieldError("H: p must be a polynomial")
        if self.l == 0:
            if p:
                raise FieldError("H: p must vanish identically when l = 0")
        else:
            if p.degree() >= self.l:
                raise FieldError("H: degree bound deg p < l violated")
            if not p.coeff(0):
                raise FieldError("H: p(0) = 0 violated (p(0) must be nonzero when l > 0)")

    @property
    def shift(self) -> int:
        """``m + n*l``, the u-power in the denominator of y."""
        return self.m + self.n * self.l

    # polynomials in (x, y)
    def w(self) -> LaurentPoly2:
        """``x^l y + p(x)``."""
        return LaurentPoly2.monomial(self.l, 1) + self.p.to_laurent(("x", "y"))

    def R(self) -> RationalFn2:
        """``x^m (x^l y + p(x))^n``."""
        return RationalFn2(LaurentPoly2.monomial(self.m, 0)) * RationalFn2(self.w()) ** self.n

    # images in (u, v)
    def images(self) -> Tuple[LaurentPoly2, LaurentPoly2]:
        uv = ("u", "v")
        X = LaurentPoly2.monomial(self.n, 0, 1, uv)
        pun = LaurentPoly2({(self.n * k, 0): c for k, c in self.p.coeffs.items()}, uv)
        Y = (LaurentPoly2.monomial(0, 1, 1, uv) - pun.shift(self.m, 0)).shift(-self.shift, 0)
        return X, Y

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "l": self.l, "p": self.p.to_expr().replace(self.p.var, "x") if self.p else "0"}


def pullback_H(X: PlanarField, H: HMap) -> PlanarField:
    """``H^* X`` on u != 0, exact, in the variables (u, v)."""
    if X.vars != ("x", "y"):
        X = PlanarField(X.P.rename(("x", "y")), X.Q.rename(("x", "y")), ("x", "y"))
    xi, yi = H.images()
    uv = ("u", "v")
    sub = {"x": xi, "y": yi}
    try:
        Ph = substitute(X.P, sub, uv)
        Qh = substitute(X.Q, sub, uv)
    except SubstitutionError as exc:
        raise FieldError(f"pullback by H leaves the exp-polynomial class: {exc}") from exc
    n = H.n
    U = Ph * ExpPoly.from_rational(LaurentPoly2.monomial(1 - n, 0, CNum(1) / n, uv))
    dy_du = ExpPoly.from_rational(yi.diff("u"))
    V = (Qh - dy_du * U) * ExpPoly.from_rational(LaurentPoly2.monomial(H.shift, 0, 1, uv))
    return PlanarField(U, V, uv)


def _u_to_x(e: ExpPoly, n: int) -> ExpPoly:
    """Rewrite an ExpPoly over (u, y) as one over (x, y) via u^n = x."""
    xy = ("x", "y")

    def conv(p: LaurentPoly2) -> LaurentPoly2:
        t = {}
        for (i, j), c in p.items():
            if i % n:
                raise FieldError("pushforward by H is multivalued (fractional power of x)")
            t[(i // n, j)] = c
        return LaurentPoly2(t, xy)

    out = ExpPoly.zero(xy)
    for s, c in e.items():
        coeff = RationalFn2(conv(c.num), conv(c.den))
        out = out + ExpPoly({conv(s): coeff}, xy)
    return out


def pushforward_H(W: PlanarField, H: HMap) -> PlanarField:
    """``H_* W``: the field on x != 0 whose pullback by H is W.

    Fails when the result involves fractional powers of x.
    """
    uv = ("u", "v")
    if W.vars != uv:
        W = PlanarField(W.P.rename(uv), W.Q.rename(uv), uv)
    n = H.n
    _, yi = H.images()
    Xu = W.P * ExpPoly.from_rational(LaurentPoly2.monomial(n - 1, 0, n, uv))
    Yu = W.P * ExpPoly.from_rational(yi.diff("u")) + W.Q * ExpPoly.from_rational(LaurentPoly2.monomial(-H.shift, 0, 1, uv))
    # v = u^{m + n l} y + u^m p(u^n), written over (u, y)
    uy = ("u", "y")
    pun = LaurentPoly2({(n * k + H.m, 0): c for k, c in H.p.coeffs.items()}, uy)
    v_img = LaurentPoly2.monomial(H.shift, 1, 1, uy) + pun
    sub = {"u": LaurentPoly2.var("u", uy), "v": v_img}
    comps = []
    for comp in (Xu, Yu):
        try:
            e = substitute(comp, sub, uy)
        except SubstitutionError as exc:
            raise FieldError(f"pushforward by H leaves the exp-polynomial class: {exc}") from exc
        if n < 0:
            e = _flip_u(e)
        comps.append(_u_to_x(e, abs(n)))
    return PlanarField(comps[0], comps[1], ("x", "y"))


def _flip_u(e: ExpPoly) -> ExpPoly:
    """u -> 1/u, used when n < 0 so that x = (1/u)^{|n|}."""
    uy = e.vars

    def fl(p: LaurentPoly2) -> LaurentPoly2:
        return LaurentPoly2({(-i, j): c for (i, j), c in p.items()}, uy)

    out = ExpPoly.zero(uy)
    for s, c in e.items():
        out = out + ExpPoly({fl(s): RationalFn2(fl(c.num), fl(c.den))}, uy)
    return out
