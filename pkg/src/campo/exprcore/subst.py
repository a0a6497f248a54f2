"""Composition with rational maps, and divisibility."""
from __future__ import annotations

from typing import Mapping

from .exppoly import ExpPoly, to_exppoly
from .laurent import LaurentPoly2
from .rational import RationalFn2

__all__ = ["substitute", "substitute_laurent", "substitute_rational", "divides", "poly_quotient", "SubstitutionError"]


class SubstitutionError(ValueError):
    """The composed expression leaves the ExpPoly class."""


def _images(src_vars, mapping: Mapping[str, object], target_vars):
    imgs = []
    for name in src_vars:
        if name not in mapping:
            raise KeyError(f"no image given for variable {name!r}")
        g = mapping[name]
        if isinstance(g, str):
            g = to_exppoly(g, target_vars)
        if isinstance(g, ExpPoly):
            g = g.as_rational()
        if isinstance(g, LaurentPoly2):
            g = RationalFn2(g)
        if not isinstance(g, RationalFn2):
            g = RationalFn2.const(g, target_vars)
        if g.vars != tuple(target_vars):
            raise ValueError(f"image of {name} is over {g.vars}, expected {target_vars}")
        imgs.append(g)
    return imgs


def _target_vars(mapping, default):
    for g in mapping.values():
        if hasattr(g, "vars"):
            return tuple(g.vars)
    return tuple(default)


def substitute_rational(p: LaurentPoly2, mapping: Mapping[str, object], target_vars=None) -> RationalFn2:
    tv = tuple(target_vars) if target_vars else _target_vars(mapping, p.vars)
    g1, g2 = _images(p.vars, mapping, tv)
    if g1.is_laurent() and g2.is_laurent():
        q = _compose_laurent(p, g1.num, g2.num)
        if q is not None:
            return RationalFn2(q, _normalized=True)
    # one common denominator, a single normalisation at the end
    is_ = [i for (i, _), _ in p.items()] or [0]
    js_ = [j for (_, j), _ in p.items()] or [0]
    imin, imax = min(0, min(is_)), max(0, max(is_))
    jmin, jmax = min(0, min(js_)), max(0, max(js_))
    n1, d1, n2, d2 = g1.num, g1.den, g2.num, g2.den
    c1, c2 = {}, {}
    num = LaurentPoly2.zero(tv)
    for (i, j), c in p.items():
        if i not in c1:
            c1[i] = (n1 ** (i - imin)) * (d1 ** (imax - i))
        if j not in c2:
            c2[j] = (n2 ** (j - jmin)) * (d2 ** (jmax - j))
        num = num + (c1[i] * c2[j]).scale(c)
    den = (d1 ** imax) * (n1 ** (-imin)) * (d2 ** jmax) * (n2 ** (-jmin))
    return RationalFn2(num, den)


def _compose_laurent(p, a: LaurentPoly2, b: LaurentPoly2):
    """Laurent composition when no non-monomial gets a negative power; else None."""
    ea = [i for (i, _), _ in p.items()]
    eb = [j for (_, j), _ in p.items()]
    if (min(ea, default=0) < 0 and not a.is_monomial()) or (min(eb, default=0) < 0 and not b.is_monomial()):
        return None
    cache1, cache2 = {}, {}
    out = LaurentPoly2.zero(a.vars)
    for (i, j), c in p.items():
        if i not in cache1:
            cache1[i] = a ** i
        if j not in cache2:
            cache2[j] = b ** j
        out = out + (cache1[i] * cache2[j]).scale(c)
    return out


def substitute_laurent(p: LaurentPoly2, mapping, target_vars=None) -> LaurentPoly2:
    r = substitute_rational(p, mapping, target_vars)
    if not r.is_laurent():
        raise SubstitutionError(f"substitution of {p} is not a Laurent polynomial")
    return r.num


def substitute(e, mapping: Mapping[str, object], target_vars=None):
    """Compose ``e`` with the map sending each variable to a rational function.

    Works on LaurentPoly2 / RationalFn2 (returning RationalFn2) and ExpPoly
    (returning ExpPoly).  Exponents must remain Laurent polynomials.
    """
    if isinstance(e, LaurentPoly2):
        return substitute_rational(e, mapping, target_vars)
    if isinstance(e, RationalFn2):
        tv = tuple(target_vars) if target_vars else _target_vars(mapping, e.vars)
        return substitute_rational(e.num, mapping, tv) / substitute_rational(e.den, mapping, tv)
    if isinstance(e, ExpPoly):
        tv = tuple(target_vars) if target_vars else _target_vars(mapping, e.vars)
        out = ExpPoly.zero(tv)
        for s, c in e.items():
            coeff = substitute(c, mapping, tv)
            if s:
                sr = substitute_rational(s, mapping, tv)
                if not sr.is_laurent():
                    raise SubstitutionError(f"exponent {s} maps to a non-Laurent function {sr}")
                out = out + ExpPoly({sr.num: coeff}, tv)
            else:
                out = out + ExpPoly.from_rational(coeff)
        return out
    raise TypeError(f"cannot substitute into {type(e).__name__}")


def poly_quotient(h: LaurentPoly2, g: LaurentPoly2):
    """``g / h`` when it is a polynomial (no negative exponents), else ``None``."""
    if not h:
        raise ZeroDivisionError("division by the zero polynomial")
    q = g.exact_div(h)
    if q is None or not q.is_polynomial():
        return None
    return q


def divides(h: LaurentPoly2, g: LaurentPoly2) -> bool:
    """True iff ``g = h * q`` with q a polynomial.

    For polynomial inputs this is divisibility in C[x, y]; membership of g in
    the principal ideal (h) is what the invariance and (*) checks need.
    """
    return poly_quotient(h, g) is not None
