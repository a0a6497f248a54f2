"""Polynomial gcd for bivariate (Laurent) polynomials.

The bivariate gcd views a polynomial as an element of ``K[x][y]`` with
``K = Q(i)``: contents in ``K[x]`` are handled with the Euclidean algorithm,
primitive parts with the subresultant PRS in ``y`` over ``K[x]``.
"""
from __future__ import annotations

from typing import List

from .cnum import CNum
from .laurent import LaurentPoly2

__all__ = ["gcd2", "poly_gcd", "coprime", "upoly_gcd"]

UPoly = List[CNum]  # dense, low degree first, trimmed
BPoly = List[UPoly]  # dense in y, coefficients in K[x]

_ZERO = CNum(0)
_ONE = CNum(1)


# ---------------------------------------------------------------------------
# univariate dense arithmetic over K
# ---------------------------------------------------------------------------
def _trim(a: UPoly) -> UPoly:
    while a and not a[-1]:
        a.pop()
    return a


def _uadd(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else _ZERO) + (b[i] if i < len(b) else _ZERO) for i in range(n)])


def _usub(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)])


def _umul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if not c:
            continue
        for j, d in enumerate(b):
            out[i + j] = out[i + j] + c * d
    return _trim(out)


def _uscale(a: UPoly, c: CNum) -> UPoly:
    if not c:
        return []
    return [x * c for x in a]


def _udivmod(a: UPoly, b: UPoly):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    r = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    inv = _ONE / b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        c = r[-1] * inv
        q[k] = c
        for i, d in enumerate(b):
            r[i + k] = r[i + k] - c * d
        r.pop()
        _trim(r)
    return _trim(q), r


def _uexact(a: UPoly, b: UPoly) -> UPoly:
    q, r = _udivmod(a, b)
    if r:
        raise ArithmeticError("inexact division in K[x]")
    return q


def _upow(a: UPoly, k: int) -> UPoly:
    out: UPoly = [_ONE]
    for _ in range(k):
        out = _umul(out, a)
    return out


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd in K[x] by the Euclidean algorithm."""
    a, b = list(a), list(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return _uscale(a, _ONE / a[-1])


# ---------------------------------------------------------------------------
# bivariate: K[x][y]
# ---------------------------------------------------------------------------
def _to_dense(p: LaurentPoly2) -> BPoly:
    dx, dy = p.max_exponents()
    out: BPoly = [[_ZERO] * (dx + 1) for _ in range(dy + 1)]
    for (i, j), c in p.items():
        out[j][i] = c
    return _btrim([_trim(r) for r in out])


def _from_dense(a: BPoly, vars) -> LaurentPoly2:
    terms = {}
    for j, row in enumerate(a):
        for i, c in enumerate(row):
            if c:
                terms[(i, j)] = c
    return LaurentPoly2(terms, vars)


def _btrim(a: BPoly) -> BPoly:
    while a and not a[-1]:
        a.pop()
    return a


def _content(a: BPoly) -> UPoly:
    g: UPoly = []
    for c in a:
        if c:
            g = upoly_gcd(g, c)
            if len(g) == 1:
                break
    return g


def _prem(a: BPoly, b: BPoly) -> BPoly:
    """Pseudo-remainder of a by b as polynomials in y over K[x]."""
    r = [list(c) for c in a]
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lr = r[-1]
        r = [_umul(c, lb) for c in r]
        for i, c in enumerate(b):
            r[i + k] = _usub(r[i + k], _umul(lr, c))
        r.pop()
        _btrim(r)
        e -= 1
    if e > 0:
        f = _upow(lb, e)
        r = [_umul(c, f) for c in r]
    return _btrim(r)


def _subresultant_last(a: BPoly, b: BPoly) -> BPoly:
    """Last nonzero member of the subresultant PRS of a, b (deg a >= deg b)."""
    g: UPoly = [_ONE]
    h: UPoly = [_ONE]
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        div = _umul(g, _upow(h, delta))
        a, b = b, [_uexact(c, div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _uexact(_upow(g, delta), _upow(h, delta - 1))


def poly_gcd(a: LaurentPoly2, b: LaurentPoly2) -> LaurentPoly2:
    """Greatest common divisor of two polynomials, monic in graded-lex order."""
    vars = a.vars
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return LaurentPoly2.const(1, vars)
    A, B = _to_dense(a), _to_dense(b)
    ca, cb = _content(A), _content(B)
    c = upoly_gcd(ca, cb)
    A = [_uexact(x, ca) for x in A]
    B = [_uexact(x, cb) for x in B]
    if len(A) < len(B):
        A, B = B, A
    if len(B) == 1:
        g: BPoly = [[_ONE]]
    else:
        s = _subresultant_last(A, B)
        if len(s) == 1:
            g = [[_ONE]]
        else:
            cs = _content(s)
            g = [_uexact(x, cs) for x in s]
    g = [_umul(x, c) for x in g]
    return _from_dense(g, vars).monic()


def gcd2(a: LaurentPoly2, b: LaurentPoly2) -> LaurentPoly2:
    """gcd of Laurent polynomials, up to a unit.

    Monomial parts contribute ``x^min * y^min`` of the two minimal exponent
    vectors, so for ordinary polynomials this is the usual polynomial gcd
    (``gcd2(x^2, x*y) == x``).
    """
    if a.vars != b.vars:
        raise ValueError("variable mismatch")
    if not a and not b:
        raise ValueError("gcd2 of two zero polynomials")
    if not b:
        return a.monic()
    if not a:
        return b.monic()
    ea, eb = a.min_exponents(), b.min_exponents()
    g = poly_gcd(a.shift(-ea[0], -ea[1]), b.shift(-eb[0], -eb[1]))
    return g.shift(min(ea[0], eb[0]), min(ea[1], eb[1]))


def coprime(a: LaurentPoly2, b: LaurentPoly2) -> bool:
    return gcd2(a, b).is_constant()
