"""First and second integrals, structured Darboux search, rational integrals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence

from .exprcore import CNum, ExpPoly, LaurentPoly2, RationalFn2, nullspace, to_exppoly
from .fields import PlanarField, invariant_cofactor, lie

__all__ = [
    "DarbouxCertificate", "SecondIntegralReport", "is_first_integral", "second_integral_report",
    "darboux_structured", "darboux_kernel", "rational_first_integral", "DarbouxSearch",
]

XY = ("x", "y")


@dataclass(frozen=True)
class DarbouxCertificate:
    """``lie(Y, h) = k * h`` with polynomial cofactor k."""

    h: LaurentPoly2
    k: LaurentPoly2

    def verify(self, Y: PlanarField) -> bool:
        return lie(Y, ExpPoly.from_rational(self.h)) == ExpPoly.from_rational(self.k * self.h)

    def to_json(self) -> dict:
        return {"h": self.h.to_expr(), "cofactor": self.k.to_expr()}


@dataclass(frozen=True)
class SecondIntegralReport:
    is_first: bool
    is_second: bool
    Yf: ExpPoly
    Hpart: Optional[ExpPoly] = None
    Gpart: Optional[ExpPoly] = None

    def to_json(self) -> dict:
        return {
            "is_first": self.is_first, "is_second": self.is_second, "Yf": self.Yf.to_expr(),
            "H": None if self.Hpart is None else self.Hpart.to_expr(),
            "G": None if self.Gpart is None else self.Gpart.to_expr(),
        }


def is_first_integral(X: PlanarField, f) -> bool:
    return lie(X, to_exppoly(f, X.vars)).is_zero()


def second_integral_report(Y: PlanarField, f) -> SecondIntegralReport:
    """Evaluate ``Y f`` and ``Y^2 f``; split ``f = H y + G`` when ``Y y = 1``."""
    f = to_exppoly(f, Y.vars)
    Yf = lie(Y, f)
    Y2f = lie(Y, Yf)
    is_first, is_second = Yf.is_zero(), Y2f.is_zero()
    Hp = Gp = None
    if is_second and lie(Y, ExpPoly.var(Y.vars[1], Y.vars)) == 1:
        Hp = Yf
        Gp = f - ExpPoly.var(Y.vars[1], Y.vars) * Yf
        if not (is_first_integral(Y, Hp) and is_first_integral(Y, Gp)):
            raise AssertionError("split parts are not first integrals")
    return SecondIntegralReport(is_first, is_second, Yf, Hp, Gp)


# ---------------------------------------------------------------------------
# Darboux search
# ---------------------------------------------------------------------------
@dataclass
class DarbouxSearch:
    certificates: List[DarbouxCertificate] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)


def _to_sympy(c: CNum):
    import sympy

    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)


def _from_sympy(v) -> Optional[CNum]:
    import sympy

    re, im = sympy.re(v), sympy.im(v)
    if not (re.is_Rational and im.is_Rational):
        return None
    return CNum(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def _poly_to_sympy(p: LaurentPoly2, x, y):
    return sum(_to_sympy(c) * x ** i * y ** j for (i, j), c in p.items())


def _shape_solutions(P: LaurentPoly2, Q: LaurentPoly2, l: int, diagnostics: List[str]):
    """Coefficient vectors of p (deg p < l, p(0) != 0) with ``{x^l y + p = 0}`` invariant.

    Invariance of an irreducible curve is vanishing of ``Y(h)`` on it; with
    ``y = -p(x)/x^l`` this gives polynomial equations in the coefficients of p.
    """
    import sympy

    x, y = sympy.symbols("x y")
    ps = sympy.symbols(f"p0:{l}")
    pexpr = sum(c * x ** i for i, c in enumerate(ps))
    h = x ** l * y + pexpr
    Ps, Qs = _poly_to_sympy(P, x, y), _poly_to_sympy(Q, x, y)
    Yh = Ps * sympy.diff(h, x) + Qs * sympy.diff(h, y)
    on_curve = sympy.together(sympy.expand(Yh.subs(y, -pexpr / x ** l)))
    num = sympy.numer(on_curve)
    eqs = [e for e in sympy.Poly(sympy.expand(num), x).coeffs() if e != 0]
    if not eqs:
        diagnostics.append(f"l={l}: every curve of the shape is invariant; representative p = 1 used")
        return [[CNum(1)] + [CNum(0)] * (l - 1)]
    sols = sympy.solve(eqs, ps, dict=True)
    out = []
    for sol in sols:
        free = [s for s in ps if s not in sol]
        if free:
            diagnostics.append(f"l={l}: solution family with free parameter(s) {', '.join(map(str, free))}; representative value 1 used")
        vals = []
        ok = True
        for s in ps:
            v = sol.get(s, sympy.Integer(1))
            v = sympy.nsimplify(v.subs({f: 1 for f in free})) if free else v
            c = _from_sympy(sympy.simplify(v))
            if c is None:
                diagnostics.append(f"l={l}: solution {s} = {v} is not a Gaussian rational; skipped")
                ok = False
                break
            vals.append(c)
        if ok and vals[0]:
            out.append(vals)
    return out


def darboux_structured(Y: PlanarField, Lmax: int = 1, *, report: Optional[DarbouxSearch] = None) -> List[DarbouxCertificate]:
    """Invariant curves among ``x``, ``y`` and ``x^l y + p(x)`` (1 <= l <= Lmax, deg p < l, p(0) != 0)."""
    if Lmax < 0:
        raise ValueError("Lmax must be nonnegative")
    report = report if report is not None else DarbouxSearch()
    P, Q = Y.polynomial_components()
    if not P and not Q:
        raise ValueError("Y must be nonzero")
    dY = Y.degree()
    certs: List[DarbouxCertificate] = []

    def add(h):
        k = invariant_cofactor(Y, h)
        if k is None:
            return
        if k and k.degree() > max(dY - 1, 0):
            report.diagnostics.append(f"cofactor of {h} exceeds the degree bound; rejected")
            return
        c = DarbouxCertificate(h, k)
        if not c.verify(Y):
            raise AssertionError("certificate failed re-verification")
        certs.append(c)

    add(LaurentPoly2.monomial(1, 0))
    add(LaurentPoly2.monomial(0, 1))
    for l in range(1, Lmax + 1):
        for vals in _shape_solutions(P, Q, l, report.diagnostics):
            h = LaurentPoly2.monomial(l, 1) + LaurentPoly2({(i, 0): c for i, c in enumerate(vals)})
            add(h)
    report.certificates = certs
    return certs


def _cofactor_matrix(certs: Sequence[DarbouxCertificate]):
    monos = sorted({e for c in certs for e in c.k.terms})
    rows = []
    for e in monos:
        coeffs = [c.k.coeff(*e) for c in certs]
        rows.append([CNum(v.re) for v in coeffs])
        if any(v.im for v in coeffs):
            rows.append([CNum(v.im) for v in coeffs])
    return rows


def _primitive(v: Sequence[CNum]) -> List[int]:
    fr = [Fraction(c.re) for c in v]
    den = lcm(*[f.denominator for f in fr]) if fr else 1
    ints = [int(f * den) for f in fr]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    ints = [i // g for i in ints] if g else ints
    first = next((i for i in ints if i), 0)
    return [-i for i in ints] if first < 0 else ints


def darboux_kernel(certs: Sequence[DarbouxCertificate]) -> List[List[int]]:
    """Primitive integer basis of ``{alpha : sum alpha_i k_i = 0}``."""
    if not certs:
        return []
    rows = _cofactor_matrix(certs)
    basis = nullspace(rows, len(certs))
    return [_primitive(v) for v in basis]


def rational_first_integral(Y: PlanarField, certs: Sequence[DarbouxCertificate]) -> Optional[RationalFn2]:
    """``prod h_i^alpha_i`` for the first primitive kernel vector, verified exactly."""
    kernel = darboux_kernel(certs)
    if not kernel:
        return None
    alpha = kernel[0]
    R = RationalFn2.const(1, XY)
    for c, a in zip(certs, alpha):
        if a:
            R = R * RationalFn2(c.h) ** a
    if R.is_constant() or not is_first_integral(Y, ExpPoly.from_rational(R)):
        raise AssertionError("Darboux combination is not a first integral")
    return R
