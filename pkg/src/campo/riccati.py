"""Riccati charts, the contraction eta(Y) and the one-form of times.

In the chart ``H: (u, v) -> (x, y)`` a field adapted to
``R = x^m (x^l y + p(x))^n`` reads ``u^k (a(v) u d/du + c(v) d/dv)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .exprcore import CNum, ExpPoly, LaurentPoly2, RationalFn2, UniPoly, gcd2, poly_quotient, solve_linear
from .fields import FieldError, HMap, PlanarField, has_isolated_singularities, lie, pullback_H, pushforward_H

__all__ = [
    "RiccatiError", "UVForm", "EtaShape", "TimeForm", "ChartTimeForm", "extract_uv_form", "eta_form",
    "eta_contraction", "time_form", "verify_time_contraction", "chart_time_form", "verify_chart_time_contraction",
    "solve_k", "build_Y_from_uv", "hmap_from_R", "contract_time_form",
]

XY = ("x", "y")
UV = ("u", "v")


class RiccatiError(ValueError):
    pass


@dataclass(frozen=True)
class UVForm:
    """``H^* Y = u^k (a(v) u d/du + c(v) d/dv)``."""

    k: int
    a: UniPoly
    c: UniPoly
    H: HMap

    @property
    def N(self) -> Optional[int]:
        """Exponent of c(v) = c v^N, or None when c is not a nonzero monomial."""
        cs = self.c.coeffs
        return next(iter(cs)) if len(cs) == 1 else None

    @property
    def c0(self) -> CNum:
        if self.N is None:
            raise RiccatiError("c(v) is not a monomial c*v^N")
        return self.c.coeff(self.N)

    def chart_field(self) -> PlanarField:
        a = self.a.to_laurent(UV, index=1)
        c = self.c.to_laurent(UV, index=1)
        return PlanarField(ExpPoly.from_rational(a.shift(self.k + 1, 0)), ExpPoly.from_rational(c.shift(self.k, 0)), UV)

    def to_json(self) -> dict:
        return {"k": self.k, "a": _uexpr(self.a), "c": _uexpr(self.c), "N": self.N, "H": self.H.to_json()}

    def __eq__(self, other):
        return (isinstance(other, UVForm) and self.k == other.k and self.a == other.a and self.c == other.c
                and self.H == other.H)

    def __hash__(self):
        return hash((self.k, self.a, self.c))


def _uexpr(u: UniPoly) -> str:
    return u.to_expr() if u else "0"


@dataclass(frozen=True)
class EtaShape:
    """``eta(Y) = scale * x^alpha * w^beta * D^gamma``.

    ``D = R - s`` when n > 0 and ``D = x^m - s w^{|n|}`` when n < 0.
    """

    alpha: int
    beta: int
    gamma: int
    s: Optional[CNum]
    scale: CNum

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
                "s": None if self.s is None else self.s.to_expr(), "scale": self.scale.to_expr()}


@dataclass(frozen=True)
class TimeForm:
    """``tau = coefficient / f * dR/R`` with ``coefficient = x w / eta(Y)``."""

    f: ExpPoly
    coefficient: RationalFn2
    R: RationalFn2

    def to_json(self) -> dict:
        return {"f": self.f.to_expr(), "coefficient": self.coefficient.to_expr(), "R": self.R.to_expr(),
                "form": f"({self.coefficient.to_expr()})/({self.f.to_expr()}) * dR/R"}


@dataclass(frozen=True)
class ChartTimeForm:
    """``rho = dv / (f o H * u^k * c(v))`` on the chart."""

    fH: ExpPoly
    k: int
    c: UniPoly

    def denominator(self) -> ExpPoly:
        c = self.c.to_laurent(UV, index=1).shift(self.k, 0)
        return self.fH * ExpPoly.from_rational(c)

    def to_json(self) -> dict:
        return {"form": f"dv/(({self.fH.to_expr()})*u^{self.k}*({_uexpr(self.c)}))"}


# ---------------------------------------------------------------------------
# (u, v) normal form
# ---------------------------------------------------------------------------
def _u_split(p: LaurentPoly2):
    """``p = u^e * q(v)`` -> (e, q) or None."""
    es = {i for (i, _) in p.terms}
    if len(es) != 1:
        return None
    e = es.pop()
    return e, UniPoly({j: c for (_, j), c in p.items()}, "v")


def extract_uv_form(Y: PlanarField, H: HMap) -> UVForm:
    """Match ``H^* Y`` against ``u^k (a(v) u d/du + c(v) d/dv)``."""
    if Y.is_zero():
        raise RiccatiError("the zero field has no chart form")
    W = pullback_H(Y, H)
    if not W.is_laurent():
        raise RiccatiError(f"H^*Y = {W} is not Laurent in (u, v)")
    U, V = W.P.as_laurent(), W.Q.as_laurent()
    su = _u_split(U) if U else None
    sv = _u_split(V) if V else None
    if (U and su is None) or (V and sv is None):
        raise RiccatiError(f"H^*Y = {W} is not of Riccati shape u^k(a(v) u d/du + c(v) d/dv): H does not adapt to Y")
    if V:
        k = sv[0]
        c = sv[1]
        if U and su[0] != k + 1:
            raise RiccatiError(f"H^*Y = {W}: u-exponents of the two components do not match")
        a = su[1] if U else UniPoly({}, "v")
    else:
        k = su[0] - 1
        a, c = su[1], UniPoly({}, "v")
    if not a.is_polynomial() or not c.is_polynomial():
        raise RiccatiError(f"H^*Y = {W}: a(v), c(v) must be polynomials")
    return UVForm(k, a, c, H)


def build_Y_from_uv(form: UVForm) -> PlanarField:
    """``Y = H_*(u^k (a(v) u d/du + c v^N d/dv))``, checked polynomial with isolated zeros."""
    H = form.H
    m, n = H.m, H.n
    if not form.c:
        raise RiccatiError("c = 0: Y would not have isolated singularities")
    N = form.N
    if N is None:
        raise RiccatiError("c(v) must be a monomial c*v^N")
    if N >= 1:
        if not form.a.coeff(0):
            raise RiccatiError("a(0) = 0 with N >= 1: Y would not have isolated singularities")
        if form.k % n:
            raise RiccatiError(f"divisibility k = n*delta fails: k = {form.k}, n = {n}")
        if (N - 1) % n:
            raise RiccatiError(f"divisibility N - 1 = n*kappa fails: N = {N}, n = {n}")
    else:
        if form.k != H.shift:
            raise RiccatiError(f"N = 0 requires k = m + n*l = {H.shift}, got {form.k}")
        for e in form.a.coeffs:
            if (e + 1) % n:
                raise RiccatiError(f"N = 0 requires a in (1/z)*C[z^n]; exponent {e} is not allowed")
    try:
        Y = pushforward_H(form.chart_field(), H)
    except FieldError as exc:
        raise RiccatiError(f"non-polynomial result: {exc}") from None
    if not Y.is_polynomial():
        raise RiccatiError(f"non-polynomial result: {Y}")
    if not has_isolated_singularities(Y):
        raise RiccatiError(f"Y = {Y} does not have isolated singularities")
    return Y


# ---------------------------------------------------------------------------
# eta and its contraction
# ---------------------------------------------------------------------------
def hmap_from_R(R: RationalFn2) -> HMap:
    """Recover (m, n, l, p) from ``R = x^m (x^l y + p(x))^n``."""
    if R.vars != XY:
        raise RiccatiError("R must be over (x, y)")
    num, den = R.num, R.den
    (a, b), (c, d) = num.min_exponents(), den.min_exponents()
    num, den = num.shift(-min(a, c), -min(b, d)), den.shift(-min(a, c), -min(b, d))
    if den.is_constant():
        base, sign = num.scale(CNum(1) / den.constant_value()), 1
        m = base.min_exponents()[0]
        wn = base.shift(-m, 0)
    else:
        if not num.is_monomial() or num.min_exponents()[1] != 0:
            raise RiccatiError(f"{R} is not of the form x^m (x^l y + p)^n")
        m = num.min_exponents()[0]
        wn = den.scale(CNum(1) / num.leading_coeff())
        sign = -1
    n = wn.degree_in("y")
    if m < 1 or n < 1:
        raise RiccatiError(f"{R} is not of the form x^m (x^l y + p)^n with m >= 1, n != 0")
    top = {i: c for (i, j), c in wn.items() if j == n}
    if len(top) != 1 or next(iter(top.values())) != 1:
        raise RiccatiError(f"{R}: leading y-coefficient is not a power of x")
    (nl,) = top
    if nl % n:
        raise RiccatiError(f"{R}: leading y-coefficient is not an n-th power of x")
    l = nl // n
    if n == 1:
        p = {i: c for (i, j), c in wn.items() if j == 0}
    else:
        sub = {i - l * (n - 1): c / n for (i, j), c in wn.items() if j == n - 1}
        p = sub
    H = HMap(m, sign * n, l, UniPoly(p, "x"))
    if H.R() != R:
        raise RiccatiError(f"{R} is not of the form x^m (x^l y + p)^n")
    return H


def _as_H(R) -> HMap:
    if isinstance(R, HMap):
        return R
    if isinstance(R, ExpPoly):
        R = R.as_rational()
    if isinstance(R, LaurentPoly2):
        R = RationalFn2(R)
    return hmap_from_R(R)


def eta_form(R) -> tuple:
    """``eta = A dx + B dy``: dR with codimension-one zeros and poles removed.

    Normalized so that ``eta = x w dR/R``.
    """
    H = _as_H(R)
    Rr = H.R()
    A, B = Rr.diff("x"), Rr.diff("y")
    D = _lcm(A.den, B.den)
    An = A.num * poly_quotient(A.den, D)
    Bn = B.num * poly_quotient(B.den, D)
    g = gcd2(An, Bn)
    An, Bn = An.exact_div(g), Bn.exact_div(g)
    # rescale to x w dR/R
    xw = RationalFn2(LaurentPoly2.monomial(1, 0) * H.w())
    target = (xw * A / Rr)
    ratio = target / RationalFn2(An)
    if not ratio.is_constant():
        raise RiccatiError("eta is not proportional to x w dR/R")
    lam = ratio.constant_value()
    return An.scale(lam), Bn.scale(lam)


def _lcm(a: LaurentPoly2, b: LaurentPoly2) -> LaurentPoly2:
    g = gcd2(a, b)
    return (a * b).exact_div(g)


def _max_power(r: LaurentPoly2, h: LaurentPoly2):
    k = 0
    while True:
        q = poly_quotient(h, r)
        if q is None:
            return r, k
        r, k = q, k + 1


def eta_contraction(Y: PlanarField, R):
    """Return ``(eta(Y), EtaShape)``; R may be an HMap or ``x^m (x^l y + p)^n``."""
    H = _as_H(R)
    A, B = eta_form(H)
    P, Q = Y.polynomial_components()
    e = A * P + B * Q
    if not e:
        raise RiccatiError("eta(Y) = 0: R is a first integral of Y")
    x = LaurentPoly2.monomial(1, 0)
    w = H.w()
    r, alpha = _max_power(e, x)
    r, beta = _max_power(r, w)
    if r.is_constant():
        return e, EtaShape(alpha, beta, 0, None, r.constant_value())
    m, n = H.m, H.n
    if n > 0:
        num, den = H.R().as_laurent(), LaurentPoly2.const(1)
    else:
        num, den = LaurentPoly2.monomial(m, 0), w ** (-n)
    dr = r.diff("x") or r.diff("y")
    g = r.exact_div(gcd2(r, dr))
    if g is None or g.degree() == 0 or r.degree() % g.degree():
        raise RiccatiError(f"residual factor {r} does not match the expected shape")
    gamma = r.degree() // g.degree()
    keys = sorted(set(g.terms) | set(num.terms) | set(den.terms))
    rows = [[num.coeff(*k), -den.coeff(*k)] for k in keys]
    sol = solve_linear(rows, [g.coeff(*k) for k in keys])
    if sol is None or not sol[0] or not sol[1]:
        raise RiccatiError(f"residual factor {r} is not a power of a fibre of R")
    s = sol[1] / sol[0]
    dom = num - den.scale(s)
    dg = dom ** gamma
    scale = r.leading_coeff() / dg.leading_coeff()
    if dg.scale(scale) != r:
        raise RiccatiError(f"residual factor {r} is not a power of a fibre of R")
    return e, EtaShape(alpha, beta, gamma, s, scale)


# ---------------------------------------------------------------------------
# one-forms of times
# ---------------------------------------------------------------------------
def time_form(f, Y: PlanarField, R, shape: Optional[EtaShape] = None) -> TimeForm:
    """``tau = x w / (f eta(Y)) * dR/R``."""
    H = _as_H(R)
    f = _to_f(f)
    if not f:
        raise RiccatiError("f must be nonzero")
    eY, _ = eta_contraction(Y, H)
    xw = LaurentPoly2.monomial(1, 0) * H.w()
    return TimeForm(f, RationalFn2(xw, eY), H.R())


def _parse(text):
    from .exprcore import parse

    return parse(text, XY)


def _to_f(f) -> ExpPoly:
    if isinstance(f, ExpPoly):
        return f
    if isinstance(f, str):
        return _parse(f)
    return ExpPoly.const(f, XY)


def verify_time_contraction(tf: TimeForm, X: PlanarField) -> bool:
    """Exact check of ``tau(X) = 1``, i.e. ``coefficient * X(R) = f * R``."""
    XR = lie(X, ExpPoly.from_rational(tf.R))
    return XR * ExpPoly.from_rational(tf.coefficient) == tf.f * ExpPoly.from_rational(tf.R)


def contract_time_form(tf: TimeForm, X: PlanarField) -> ExpPoly:
    """``tau(X)`` as an ExpPoly; needs an invertible f."""
    XR = lie(X, ExpPoly.from_rational(tf.R))
    return XR * ExpPoly.from_rational(tf.coefficient / tf.R) / tf.f


def chart_time_form(f, form: UVForm) -> ChartTimeForm:
    from .families import pullback_f

    if form.N is None:
        raise RiccatiError("c(v) must be a nonzero monomial c*v^N")
    f = _to_f(f)
    return ChartTimeForm(pullback_f(f, form.H), form.k, form.c)


def verify_chart_time_contraction(rho: ChartTimeForm, HX: PlanarField) -> bool:
    """Exact check of ``rho(H^*X) = 1``."""
    return HX.Q == rho.denominator()


# ---------------------------------------------------------------------------
# the exponent identity
# ---------------------------------------------------------------------------
def solve_k(shape: EtaShape, H: HMap, N: Optional[int] = None) -> int:
    """``k = n (alpha - 1) - m (N - 1)``, valid when gamma = 0 and beta = N."""
    if shape.gamma != 0:
        raise RiccatiError("solve_k assumes gamma = 0")
    if N is None:
        N = shape.beta
    elif N != shape.beta:
        raise RiccatiError(f"solve_k assumes beta = N; beta = {shape.beta}, N = {N}")
    return H.n * (shape.alpha - 1) - H.m * (N - 1)
