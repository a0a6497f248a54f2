"""Normal-form families of complete fields and their decompositions.

Tags follow the classical lists: ``S1``..``S5`` (proper/algebraic flows),
``BI``..``BIII`` (complete polynomial fields) and ``A_I``, ``A_II``,
``A_III``, ``B`` (fields ``f*Y`` with f transcendental).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Optional, Tuple

from .exprcore import CNum, ExpPoly, LaurentPoly2, RationalFn2, UniPoly, divides, parse, substitute
from .exprcore.cnum import as_cnum
from .fields import FieldError, HMap, PlanarField, has_isolated_singularities, lie, pullback_H, pushforward_H

__all__ = [
    "FamilySpec", "FamilyError", "Decomposition", "TAGS", "build", "build_full", "canonical_first_integral",
    "check_theoremA_relation", "decompose", "condition_star", "parse_unipoly",
]

XY = ("x", "y")
UV = ("u", "v")


class FamilyError(ValueError):
    """A violated side condition; ``condition`` is a stable identifier."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


# kinds: nat (>= 0), pos (>= 1), nz (nonzero int), cnum, uni_z / uni_x (polynomial, Laurent allowed
# when noted), fx (ExpPoly in x only), f (ExpPoly in x, y, optional), eps (0 or 1)
_SCHEMA: Dict[str, Dict[str, Tuple[str, Any]]] = {
    "S1": {"a": ("fx", None), "b": ("fx", None)},
    "S2": {"lambda": ("cnum", None), "mu": ("cnum", None)},
    "S3": {"lambda": ("cnum", None), "m": ("nat", None)},
    "S4": {"lambda": ("uni_z", None), "m": ("pos", None), "n": ("pos", None)},
    "S5": {"lambda": ("uni_z", None), "m": ("pos", None), "n": ("pos", None), "l": ("pos", None), "p": ("uni_x", None)},
    "BI": {"c": ("cnum", 0), "d": ("cnum", 0), "a": ("uni_x", "0"), "b": ("uni_x", "0")},
    "BII": {"a": ("cnum", 0), "lambda": ("uni_z", None), "m": ("pos", None), "n": ("pos", None)},
    "BIII": {"a": ("cnum", 0), "lambda": ("uni_z", None), "m": ("pos", None), "n": ("pos", None),
             "l": ("pos", None), "p": ("uni_x", None)},
    "A_I": {"f": ("f", None), "N": ("nat", None), "eps": ("eps", 0), "C": ("cnum", None),
            "A": ("uni_x", "0"), "B": ("uni_x", "0")},
    "A_II": {"f": ("f", None), "kappa": ("int", 0), "delta": ("int", 0), "lambda": ("uni_z", None),
             "m": ("pos", None), "n": ("pos", None), "a": ("cnum", 0)},
    "A_III": {"f": ("f", None), "kappa": ("int", 0), "delta": ("int", 0), "lambda": ("uni_z", None),
              "m": ("pos", None), "n": ("pos", None), "l": ("pos", None), "p": ("uni_x", None), "a": ("cnum", 0)},
    "B": {"f": ("f", None), "m": ("pos", None), "n": ("pos", None), "l": ("nat", 0), "p": ("uni_x", "0"),
          "c": ("cnum", None), "a": ("uni_z", None)},
}
TAGS = tuple(_SCHEMA)


def parse_unipoly(text, var: str) -> UniPoly:
    if isinstance(text, UniPoly):
        return UniPoly(text.coeffs, var)
    if not isinstance(text, str):
        return UniPoly.const(text, var) if text else UniPoly({}, var)
    e = parse(text, (var, "_"))
    if not e.is_laurent():
        raise FamilyError("expression", f"{text!r} is not a Laurent polynomial in {var}")
    return UniPoly.from_laurent(e.as_laurent(), var)


def _coerce(tag: str, name: str, kind: str, value):
    if kind in ("nat", "pos", "int", "eps", "nz"):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise FamilyError("parameter-type", f"{tag}.{name} must be an integer")
        try:
            v = int(value)
        except ValueError:
            raise FamilyError("parameter-type", f"{tag}.{name} must be an integer") from None
        if kind == "nat" and v < 0:
            raise FamilyError("parameter-range", f"{tag}.{name} must be >= 0")
        if kind == "pos" and v < 1:
            raise FamilyError("parameter-range", f"{tag}.{name} must be >= 1")
        if kind == "eps" and v not in (0, 1):
            raise FamilyError("epsilon", f"{tag}.{name} must be 0 or 1")
        return v
    if kind == "cnum":
        try:
            return as_cnum(value)
        except (TypeError, ValueError) as exc:
            raise FamilyError("parameter-type", f"{tag}.{name}: {exc}") from None
    if kind == "uni_z":
        return parse_unipoly(value, "z")
    if kind == "uni_x":
        return parse_unipoly(value, "x")
    if kind == "fx":
        e = value if isinstance(value, ExpPoly) else parse(str(value), XY)
        if e.uses("y"):
            raise FamilyError("parameter-type", f"{tag}.{name} must depend on x only")
        return e
    if kind == "f":
        if value is None:
            return None
        return value if isinstance(value, ExpPoly) else parse(str(value), XY)
    raise AssertionError(kind)


@dataclass(frozen=True)
class FamilySpec:
    """A family tag with its parameters, coerced to exact types.

    ``f`` may be omitted for the transcendental families; it is then opaque
    and operations that need it report so.
    """

    tag: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in _SCHEMA:
            raise FamilyError("tag", f"unknown family tag {self.tag!r}; expected one of {', '.join(TAGS)}")
        schema = _SCHEMA[self.tag]
        unknown = set(self.params) - set(schema)
        if unknown:
            raise FamilyError("parameter-name", f"{self.tag} has no parameter(s) {sorted(unknown)}")
        out = {}
        for name, (kind, default) in schema.items():
            if name in self.params and self.params[name] is not None:
                out[name] = _coerce(self.tag, name, kind, self.params[name])
            elif default is not None:
                out[name] = _coerce(self.tag, name, kind, default)
            elif kind == "f":
                out[name] = None
            else:
                raise FamilyError("parameter-missing", f"{self.tag} requires parameter {name!r}")
        object.__setattr__(self, "params", out)

    def __getitem__(self, name):
        return self.params[name]

    def __hash__(self):
        return hash((self.tag, json.dumps(self.to_json(), sort_keys=True)))

    def __eq__(self, other):
        return isinstance(other, FamilySpec) and self.to_json() == other.to_json()

    def to_json(self) -> dict:
        out = {}
        for name, v in self.params.items():
            if v is None:
                continue
            if isinstance(v, int):
                out[name] = v
            elif isinstance(v, UniPoly):
                out[name] = v.to_expr() if v else "0"
            else:
                out[name] = v.to_expr()
        return {"tag": self.tag, "params": out}

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        if "tag" not in data:
            raise FamilyError("tag", "missing 'tag'")
        return cls(data["tag"], dict(data.get("params", {})))

    def hmap(self) -> HMap:
        """The chart map attached to the family's canonical integral."""
        p = self.params
        if self.tag in ("S4", "A_II", "BII"):
            return HMap(p["m"], p["n"], 0, UniPoly({}, "x"))
        if self.tag in ("S5", "A_III", "BIII", "B"):
            return HMap(p["m"], p["n"], p["l"], p["p"])
        raise FamilyError("chart", f"{self.tag} has no chart map")


@dataclass(frozen=True)
class Decomposition:
    """``X = G * F * Y`` with ``lie(F*Y, R) = Omega * R**j``.

    For B the data lives in the (u, v) chart: ``Y`` is the pulled-back field,
    ``polynomial_Y`` the polynomial field on (x, y), and ``chart`` the map.
    ``G`` is None when f is opaque.
    """

    G: Optional[ExpPoly]
    F: RationalFn2
    Y: PlanarField
    R: RationalFn2
    Omega: CNum
    j: int
    polynomial_Y: PlanarField
    chart: Optional[HMap] = None

    def FY(self) -> PlanarField:
        return self.Y.scale(ExpPoly.from_rational(self.F))

    def reassemble(self) -> PlanarField:
        if self.G is None:
            raise FamilyError("opaque-f", "f is opaque; G is unavailable")
        return self.FY().scale(self.G)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------
def _X(vars=XY):
    return LaurentPoly2.var(vars[0], vars)


def _Yv(vars=XY):
    return LaurentPoly2.var(vars[1], vars)


def _ep(e) -> ExpPoly:
    if isinstance(e, ExpPoly):
        return e
    return ExpPoly.from_rational(e)


def _compose(lam: UniPoly, z: LaurentPoly2) -> RationalFn2:
    r = lam.compose(z)
    return r if isinstance(r, RationalFn2) else RationalFn2(r)


def _w(l: int, p: UniPoly) -> LaurentPoly2:
    return LaurentPoly2.monomial(l, 1) + p.to_laurent(XY)


def _R(m: int, n: int, l: int, p: UniPoly) -> RationalFn2:
    return RationalFn2(LaurentPoly2.monomial(m, 0)) * RationalFn2(_w(l, p)) ** n


def _check_coprime(m, n):
    if gcd(m, abs(n)) != 1:
        raise FamilyError("coprimality", f"gcd(m, n) = {gcd(m, abs(n))} != 1")


def _check_p(l: int, p: UniPoly, allow_zero_l=False):
    if not p.is_polynomial():
        raise FamilyError("p-polynomial", "p must be a polynomial in x")
    if l == 0 and allow_zero_l:
        if p:
            raise FamilyError("p-vanishes", "p must vanish identically when l = 0")
        return
    if p.degree() >= l:
        raise FamilyError("degree-bound", f"deg p = {p.degree()} must be < l = {l}")
    if not p.coeff(0):
        raise FamilyError("p(0)", "p(0) must be nonzero")


def _check_poly_lambda(lam: UniPoly):
    if not lam.is_polynomial():
        raise FamilyError("lambda-polynomial", "lambda must be a polynomial in z")


def condition_star(lam: UniPoly, m: int, n: int, l: int, p: UniPoly, a) -> Tuple[LaurentPoly2, Optional[LaurentPoly2]]:
    """The expression ``lambda(R)(m p + n x p') - a p`` and its quotient by x^l (None if not divisible)."""
    R = _R(m, n, l, p).as_laurent()
    pl = p.to_laurent(XY)
    dpl = p.derivative().to_laurent(XY)
    lamR = lam.compose(R)
    expr = lamR * (pl.scale(m) + (_X() * dpl).scale(n)) - pl.scale(as_cnum(a))
    xl = LaurentPoly2.monomial(l, 0)
    q = expr.exact_div(xl)
    return expr, (q if q is not None and q.is_polynomial() else None)


def _suzuki5(lam: UniPoly, m, n, l, p) -> PlanarField:
    """``lambda(R)/x^l * {n x^{l+1} d/dx - [(m+nl) x^l y + m p + n x p'] d/dy}``."""
    R = _R(m, n, l, p).as_laurent()
    lamR = _compose(lam, R)
    x, y = _X(), _Yv()
    pl, dpl = p.to_laurent(XY), p.derivative().to_laurent(XY)
    P = lamR * RationalFn2(x.scale(n))
    Qb = LaurentPoly2.monomial(l, 1, m + n * l) + pl.scale(m) + (x * dpl).scale(n)
    Q = -lamR * RationalFn2(Qb) * RationalFn2(LaurentPoly2.monomial(-l, 0))
    return PlanarField(_ep(P), _ep(Q), XY)


def _suzuki4(lam: UniPoly, m, n) -> PlanarField:
    R = LaurentPoly2.monomial(m, n)
    lamR = _compose(lam, R)
    return PlanarField(_ep(lamR * RationalFn2(_X().scale(n))), _ep(lamR * RationalFn2(_Yv().scale(-m))), XY)


def _require_polynomial(Y: PlanarField, what="result"):
    if not Y.is_polynomial():
        raise FamilyError("non-polynomial", f"{what} is not a polynomial field: {Y}")


def _require_isolated(Y: PlanarField):
    if Y.is_zero():
        raise FamilyError("isolated-singularities", "Y is the zero field")
    if not has_isolated_singularities(Y):
        raise FamilyError("isolated-singularities", f"Y = {Y} has a curve of zeros")


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------
def _A_I_exponent(p) -> int:
    return p["N"] - 1 + p["eps"]


def _validate_A_I(p):
    if p["N"] >= 1 and p["eps"] != 0:
        raise FamilyError("epsilon", "eps must be 0 when N >= 1")


def _A_FY(spec: FamilySpec) -> PlanarField:
    """The rational complete field F*Y of forms ii) and iii)."""
    p = spec.params
    m, n = p["m"], p["n"]
    a = p["a"]
    if spec.tag == "A_II":
        base = _suzuki4(p["lambda"], m, n)
        extra = PlanarField(ExpPoly.zero(XY), _ep(_Yv().scale(a)), XY)
    else:
        base = _suzuki5(p["lambda"], m, n, p["l"], p["p"])
        extra = PlanarField(ExpPoly.zero(XY), _ep(RationalFn2(_w(p["l"], p["p"]).scale(a), LaurentPoly2.monomial(p["l"], 0))), XY)
    return base + extra


def _A_F(spec: FamilySpec) -> RationalFn2:
    p = spec.params
    if spec.tag == "A_I":
        return RationalFn2(LaurentPoly2.monomial(-_A_I_exponent(p), 0))
    R = spec_R(spec)
    return (R ** p["kappa"] * RationalFn2(LaurentPoly2.monomial(p["delta"], 0))).inverse()


def spec_R(spec: FamilySpec) -> RationalFn2:
    p = spec.params
    if spec.tag in ("S1", "A_I"):
        return RationalFn2(_X())
    if spec.tag in ("S4", "A_II", "BII"):
        return RationalFn2(LaurentPoly2.monomial(p["m"], p["n"]))
    if spec.tag in ("S5", "A_III", "BIII", "B"):
        return _R(p["m"], p["n"], p["l"], p["p"])
    raise FamilyError("no-integral", f"{spec.tag} has no canonical polynomial R")


def _B_chart_field(p) -> PlanarField:
    k = p["m"] + p["n"] * p["l"]
    a = p["a"].to_laurent(UV, index=1)
    U = a.shift(k + 1, 0)
    V = LaurentPoly2.monomial(k, 0, p["c"], UV)
    return PlanarField(_ep(U), _ep(V), UV)


def _validate_B(p):
    n = p["n"]
    if not p["c"]:
        raise FamilyError("c-nonzero", "c must be nonzero")
    a = p["a"]
    if not a:
        raise FamilyError("a-membership", "a must be nonzero")
    for e in a.coeffs:
        if e < -1 or (e + 1) % n:
            raise FamilyError("a-membership", f"a must lie in (1/z)*C[z^n]; exponent {e} is not allowed for n = {n}")
    if n > 1 and a.coeff(-1):
        raise FamilyError("a(0)", "the z^-1 coefficient of a must vanish when n > 1")


def build(spec: FamilySpec) -> PlanarField:
    """The family's field; for transcendental families the polynomial part Y."""
    t, p = spec.tag, spec.params
    x, y = _X(), _Yv()
    if t == "S1":
        return PlanarField(ExpPoly.zero(XY), p["a"] * ExpPoly.var("y") + p["b"], XY)
    if t == "S2":
        return PlanarField(_ep(x.scale(p["lambda"])), _ep(y.scale(p["mu"])), XY)
    if t == "S3":
        if not p["lambda"]:
            raise FamilyError("lambda-nonzero", "S3 requires lambda != 0")
        lam, m = p["lambda"], p["m"]
        return PlanarField(_ep(x.scale(lam)), _ep(y.scale(lam * m) + LaurentPoly2.monomial(m, 0)), XY)
    if t == "S4":
        _check_coprime(p["m"], p["n"])
        if not p["lambda"].is_polynomial():
            raise FamilyError("lambda-entire", "lambda must not have negative powers of z")
        return _suzuki4(p["lambda"], p["m"], p["n"])
    if t == "S5":
        m, n, l, pp, lam = p["m"], p["n"], p["l"], p["p"], p["lambda"]
        _check_coprime(m, n)
        _check_p(l, pp)
        if not lam.is_polynomial():
            raise FamilyError("lambda-entire", "lambda must not have negative powers of z")
        if lam and m * lam.ord() < l:
            raise FamilyError("order-at-zero", f"lambda needs a zero of order >= l/m = {l}/{m} at z = 0, has order {lam.ord()}")
        Y = _suzuki5(lam, m, n, l, pp)
        _require_polynomial(Y)
        return Y
    if t == "BI":
        P = LaurentPoly2.monomial(1, 0, p["c"]) + LaurentPoly2.const(p["d"])
        Q = p["a"].to_laurent(XY) * y + p["b"].to_laurent(XY)
        _check_poly_x(p["a"], "a")
        _check_poly_x(p["b"], "b")
        return PlanarField(_ep(P), _ep(Q), XY)
    if t == "BII":
        _check_coprime(p["m"], p["n"])
        _check_poly_lambda(p["lambda"])
        return _suzuki4(p["lambda"], p["m"], p["n"]) + PlanarField(ExpPoly.zero(XY), _ep(y.scale(p["a"])), XY)
    if t == "BIII":
        m, n, l, pp, lam = p["m"], p["n"], p["l"], p["p"], p["lambda"]
        _check_coprime(m, n)
        _check_p(l, pp)
        _check_poly_lambda(lam)
        expr, q = condition_star(lam, m, n, l, pp, p["a"])
        if q is None:
            raise FamilyError("condition-star", f"lambda(R)(m p + n x p') - a p = {expr} is not in x^{l}*C[x,y]")
        extra = PlanarField(ExpPoly.zero(XY), _ep(RationalFn2(_w(l, pp).scale(p["a"]), LaurentPoly2.monomial(l, 0))), XY)
        Y = _suzuki5(lam, m, n, l, pp) + extra
        _require_polynomial(Y)
        return Y
    if t == "A_I":
        _validate_A_I(p)
        _check_poly_x(p["A"], "A")
        _check_poly_x(p["B"], "B")
        Y = PlanarField(_ep(LaurentPoly2.monomial(p["N"], 0, p["C"])),
                        _ep(p["A"].to_laurent(XY) * y + p["B"].to_laurent(XY)), XY)
        _require_isolated(Y)
        return Y
    if t in ("A_II", "A_III"):
        _check_coprime(p["m"], p["n"])
        if t == "A_III":
            _check_p(p["l"], p["p"])
        lam = p["lambda"]
        if lam and lam.ord() < -p["kappa"]:
            raise FamilyError("lambda-membership", f"lambda must lie in z^(-kappa)*C[z] with kappa = {p['kappa']}")
        FY = _A_FY(spec)
        Y = FY.scale(_ep(_A_F(spec).inverse()))
        _require_polynomial(Y)
        _require_isolated(Y)
        return Y
    if t == "B":
        _check_coprime(p["m"], p["n"])
        _check_p(p["l"], p["p"], allow_zero_l=True)
        _validate_B(p)
        H = spec.hmap()
        try:
            Y = pushforward_H(_B_chart_field(p), H)
        except FieldError as exc:
            raise FamilyError("non-polynomial", str(exc)) from None
        _require_polynomial(Y)
        _require_isolated(Y)
        return Y
    raise AssertionError(t)


def _check_poly_x(u: UniPoly, name):
    if not u.is_polynomial():
        raise FamilyError(f"{name}-polynomial", f"{name} must be a polynomial in x")


def build_full(spec: FamilySpec) -> PlanarField:
    """``f * Y`` for the transcendental families; ``build`` otherwise."""
    Y = build(spec)
    if "f" not in spec.params:
        return Y
    f = spec.params["f"]
    if f is None:
        raise FamilyError("opaque-f", "f is opaque; the full field is unavailable")
    return Y.scale(f)


# ---------------------------------------------------------------------------
# integrals and decompositions
# ---------------------------------------------------------------------------
def canonical_first_integral(spec: FamilySpec) -> Optional[RationalFn2]:
    """The family's rational integral R, or None.

    S1, S4, S5 return first integrals. S2 returns ``y^p/x^q`` when
    ``lambda/mu = p/q`` is rational. A-forms return the polynomial R of the
    relation ``lie(F*Y, R) = Omega R^j``; B returns ``v`` over (u, v).
    """
    t, p = spec.tag, spec.params
    build(spec)
    if t in ("S1", "S4", "S5", "A_I", "A_II", "A_III"):
        return spec_R(spec)
    if t == "S2":
        lam, mu = p["lambda"], p["mu"]
        if not lam and not mu:
            raise FamilyError("zero-field", "S2 with lambda = mu = 0 is the zero field")
        if not mu:
            return RationalFn2(_Yv())
        if not lam:
            return RationalFn2(_X())
        r = lam / mu
        if r.im:
            return None
        q = Fraction(r.re)
        num, den = q.numerator, q.denominator
        return RationalFn2(LaurentPoly2.monomial(-den, num))
    if t == "B":
        return RationalFn2(LaurentPoly2.var("v", UV))
    return None


def check_theoremA_relation(spec: FamilySpec) -> Tuple[CNum, int]:
    """Verify ``lie(F*Y, R) = Omega * R^j`` and return ``(Omega, j)``."""
    if spec.tag not in ("A_I", "A_II", "A_III"):
        raise FamilyError("tag", "the relation applies to A_I, A_II, A_III")
    d = decompose(spec)
    val = lie(d.FY(), _ep(d.R))
    if not val.is_rational():
        raise FamilyError("relation", f"lie(F*Y, R) = {val} is not rational")
    r = val.as_rational()
    if not r:
        return CNum(0), d.j
    q1 = r / d.R
    if q1.is_constant():
        return q1.constant_value(), 1
    if r.is_constant():
        return r.constant_value(), 0
    raise FamilyError("relation", f"lie(F*Y, R) = {r} is not of the form Omega*R^j")


def decompose(spec: FamilySpec) -> Decomposition:
    t, p = spec.tag, spec.params
    if t not in ("A_I", "A_II", "A_III", "B"):
        raise FamilyError("tag", "decompose applies to A_I, A_II, A_III and B")
    Y = build(spec)
    f = p["f"]
    if t == "B":
        H = spec.hmap()
        k = H.shift
        Yc = pullback_H(Y, H)
        F = RationalFn2(LaurentPoly2.monomial(-k, 0, 1, UV))
        G = None
        if f is not None:
            G = pullback_f(f, H) * ExpPoly.from_rational(LaurentPoly2.monomial(k, 0, 1, UV))
        R = RationalFn2(LaurentPoly2.var("v", UV))
        return Decomposition(G, F, Yc, R, p["c"], 0, Y, H)
    F = _A_F(spec)
    G = None if f is None else f * ExpPoly.from_rational(F.inverse())
    R = spec_R(spec)
    if t == "A_I":
        j = 1 if (p["N"] >= 1 or p["eps"] == 0) else 0
        return Decomposition(G, F, Y, R, p["C"], j, Y)
    return Decomposition(G, F, Y, R, p["n"] * p["a"], 1, Y)


def pullback_f(f: ExpPoly, H: HMap) -> ExpPoly:
    """``f o H`` over (u, v)."""
    xi, yi = H.images()
    return substitute(f, {"x": xi, "y": yi}, UV)
