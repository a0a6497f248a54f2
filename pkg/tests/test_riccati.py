import pytest
from hypothesis import assume, given, strategies as st

from campo.exprcore import CNum, ExpPoly, LaurentPoly2, RationalFn2, UniPoly, parse
from campo.families import FamilySpec, build, build_full, pullback_f, spec_R
from campo.fields import HMap, PlanarField, lie, parse_field, pullback_H
from campo.riccati import (EtaShape, RiccatiError, UVForm, build_Y_from_uv, chart_time_form, eta_contraction,
                           eta_form, extract_uv_form, hmap_from_R, solve_k, time_form, verify_chart_time_contraction,
                           verify_time_contraction)

XY = ("x", "y")


def E(t):
    return parse(t, XY)


def L(t):
    return E(t).as_laurent()


def V(coeffs):
    return UniPoly(dict(coeffs), "v")


H11 = HMap(1, 1)


# extract_uv_form ------------------------------------------------------------
def test_extract_linear_saddle():
    f = extract_uv_form(parse_field("x:x, y:-y"), H11)
    assert (f.k, f.a, f.c) == (0, V({0: 1}), V({}))


def test_extract_b11_field():
    f = extract_uv_form(parse_field("x:x^2, y:1 - x*y"), H11)
    assert (f.k, f.a, f.c, f.N) == (1, V({0: 1}), V({0: 1}), 0)


def test_extract_rejects_unadapted():
    with pytest.raises(RiccatiError):
        extract_uv_form(parse_field("x:1, y:1"), H11)


def test_extract_y_dx_is_adapted():
    f = extract_uv_form(parse_field("x:y, y:0"), H11)
    assert (f.k, f.a, f.c) == (-2, V({1: 1}), V({2: 1}))


# build_Y_from_uv -------------------------------------------------------------
def test_build_b11_field():
    assert build_Y_from_uv(UVForm(1, V({0: 1}), V({0: 1}), H11)) == parse_field("x:x^2, y:1 - x*y")


def test_build_rejects_c_zero():
    with pytest.raises(RiccatiError):
        build_Y_from_uv(UVForm(0, V({1: 1}), V({}), H11))


def test_build_rejects_a0_zero():
    with pytest.raises(RiccatiError):
        build_Y_from_uv(UVForm(0, V({1: 1}), V({1: 1}), H11))


HMAPS = [HMap(1, 1), HMap(2, 1), HMap(1, 2), HMap(1, 1, 1, "1"), HMap(2, 1, 1, "-2"), HMap(1, 3), HMap(3, 2, 1, "1")]


@st.composite
def uv_forms(draw):
    H = draw(st.sampled_from(HMAPS))
    n = H.n
    N = draw(st.sampled_from([0, 1, 1 + n]))
    c0 = draw(st.integers(-3, 3).filter(bool))
    if N == 0:
        k = H.shift
        exps = [e for e in range(-1, 4) if (e + 1) % n == 0]
        a = {e: draw(st.integers(-2, 2)) for e in draw(st.lists(st.sampled_from(exps), max_size=3, unique=True))}
    else:
        k = n * draw(st.integers(-1, 2))
        a = {0: draw(st.integers(1, 3))}
        a.update({e: draw(st.integers(-2, 2)) for e in range(1, draw(st.integers(1, 3)))})
    return UVForm(k, V({e: c for e, c in a.items() if c}), V({N: c0}), H)


@given(uv_forms())
def test_uv_round_trip(form):
    try:
        Y = build_Y_from_uv(form)
    except RiccatiError:
        assume(False)
    assert extract_uv_form(Y, form.H) == form


# eta -----------------------------------------------------------------------
def test_eta_form_monomial():
    A, B = eta_form(RationalFn2(L("x*y")))
    assert (A, B) == (L("y"), L("x"))


def test_eta_contraction_linear():
    e, shape = eta_contraction(parse_field("x:x, y:2*y"), RationalFn2(L("x*y")))
    assert e == L("3*x*y")
    assert (shape.alpha, shape.beta, shape.gamma, shape.scale) == (1, 1, 0, CNum(3))


def test_eta_contraction_first_integral_errors():
    with pytest.raises(RiccatiError):
        eta_contraction(parse_field("x:2*x, y:-3*y"), RationalFn2(L("x^3*y^2")))


def test_eta_contraction_fibre_factor():
    e, shape = eta_contraction(parse_field("x:x, y:y*(x*y - 6)"), RationalFn2(L("x*y")))
    assert e == L("x*y*(x*y - 5)")
    assert (shape.alpha, shape.beta, shape.gamma, shape.s) == (1, 1, 1, CNum(5))


@given(st.sampled_from(HMAPS), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(1, 4),
       st.integers(1, 3))
def test_eta_contraction_reassembles(H, alpha, beta, gamma, s, scale):
    x = L("x")
    w = H.w()
    R = H.R()
    D = R.as_laurent() - LaurentPoly2.const(s) if H.n > 0 else None
    target = (x ** alpha * w ** beta * D ** gamma).scale(scale)
    # Y = (target/A) d/dx has eta(Y) = target when A divides target
    A, B = eta_form(H)
    from campo.exprcore import poly_quotient
    q = poly_quotient(A, target)
    assume(q is not None and q.is_polynomial())
    Y = PlanarField(ExpPoly.from_rational(RationalFn2(q)), ExpPoly.zero(XY), XY)
    e, shape = eta_contraction(Y, H)
    rebuilt = x ** shape.alpha * w ** shape.beta
    if shape.gamma:
        rebuilt = rebuilt * (R.as_laurent() - LaurentPoly2.const(shape.s)) ** shape.gamma
    assert rebuilt.scale(shape.scale) == e == target


# time forms ------------------------------------------------------------------
def test_time_form_linear():
    Y = parse_field("x:x, y:2*y")
    tf = time_form(1, Y, RationalFn2(L("x*y")))
    assert tf.coefficient == RationalFn2.const(CNum(1) / 3, XY)
    assert verify_time_contraction(tf, Y)


def test_time_form_requires_no_first_integral():
    with pytest.raises(RiccatiError):
        time_form(1, parse_field("x:2*x, y:-3*y"), RationalFn2(L("x^3*y^2")))


def test_time_form_b11_field():
    spec = FamilySpec("B", {"m": 1, "n": 1, "c": 1, "a": "1", "f": "exp(-x*y)"})
    tf = time_form(spec.params["f"], build(spec), spec_R(spec))
    assert verify_time_contraction(tf, build_full(spec))


def test_chart_time_form_b11_field():
    spec = FamilySpec("B", {"m": 1, "n": 1, "c": 1, "a": "1", "f": "exp(-x*y)"})
    form = extract_uv_form(build(spec), spec.hmap())
    rho = chart_time_form(spec.params["f"], form)
    assert verify_chart_time_contraction(rho, pullback_H(build_full(spec), spec.hmap()))


@given(uv_forms(), st.sampled_from(["1", "exp(x)", "x^2 + 1", "exp(x*y)"]))
def test_time_contraction_on_built_fields(form, f):
    try:
        Y = build_Y_from_uv(form)
    except RiccatiError:
        assume(False)
    R = form.H.R()
    assume(not lie(Y, ExpPoly.from_rational(R)).is_zero())
    f = E(f)
    tf = time_form(f, Y, form.H)
    assert verify_time_contraction(tf, Y.scale(f))


# solve_k ---------------------------------------------------------------------
@pytest.mark.parametrize("alpha,N,m,n,k", [(1, 1, 1, 1, 0), (1, 0, 1, 1, 1), (2, 1, 2, 3, 3)])
def test_solve_k_values(alpha, N, m, n, k):
    assert solve_k(EtaShape(alpha, N, 0, None, CNum(1)), HMap(m, n), N) == k


def test_solve_k_rejects_fibre_factor():
    with pytest.raises(RiccatiError):
        solve_k(EtaShape(1, 1, 1, CNum(5), CNum(1)), HMap(1, 1), 1)


@given(uv_forms())
def test_solve_k_matches_extraction(form):
    try:
        Y = build_Y_from_uv(form)
    except RiccatiError:
        assume(False)
    try:
        _, shape = eta_contraction(Y, form.H)
    except RiccatiError:
        assume(False)
    assume(shape.gamma == 0)
    assert solve_k(shape, form.H, form.N) == form.k


# hmap_from_R -------------------------------------------------------------------
@pytest.mark.parametrize("H", HMAPS + [HMap(1, -1), HMap(2, -1, 1, "1")])
def test_hmap_from_R_round_trip(H):
    assert hmap_from_R(H.R()) == H


def test_hmap_from_R_rejects():
    with pytest.raises(RiccatiError):
        hmap_from_R(RationalFn2(L("x + y^2")))
