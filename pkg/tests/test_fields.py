import pytest
from hypothesis import given, strategies as st

from campo.exprcore import CNum, ExpPoly, LaurentPoly2, RationalFn2, parse
from campo.fields import (FieldError, HMap, PlanarField, PolyMap, bracket, has_isolated_singularities,
                          invariant_cofactor, is_invariant_curve, lie, parse_field, pullback_H,
                          pullback_automorphism, pushforward_H)

from test_exprcore import laurent

XY = ("x", "y")
UV = ("u", "v")


def E(text, vars=XY):
    return parse(text, vars)


def F(text):
    return parse_field(text)


@st.composite
def poly_fields(draw, hi=2):
    return PlanarField(ExpPoly.from_rational(RationalFn2(draw(laurent(0, hi, 3)))),
                       ExpPoly.from_rational(RationalFn2(draw(laurent(0, hi, 3)))), XY)


@st.composite
def exp_functions(draw):
    a = draw(laurent(0, 2, 3))
    s = draw(laurent(0, 1, 2))
    return ExpPoly.exp(s, RationalFn2(a)) if a else ExpPoly.from_rational(RationalFn2(a))


def test_parse_field_and_text_round_trip():
    X = F("x:x^2*exp(-x*y), y:(1-x*y)*exp(-x*y)")
    assert parse_field(X.to_text()) == X
    assert PlanarField.from_json(X.to_json()) == X


@pytest.mark.parametrize("bad", ["x:1; y:2", "x:1, y:", "x:1, x:2", "z:1", "x 1, y:2"])
def test_parse_field_rejects(bad):
    with pytest.raises(ValueError):
        parse_field(bad)


def test_parse_field_missing_component_is_zero():
    assert parse_field("x:1") == PlanarField(E("1"), E("0"), XY)
    assert parse_field("y:1, x:2") == PlanarField(E("2"), E("1"), XY)


# lie -----------------------------------------------------------------------
def test_lie_first_integral_x_exp_minus_y():
    assert lie(F("x:x, y:1"), E("x*exp(-y)")).is_zero()


def test_lie_monomial_integral():
    m, n = 2, 3
    assert lie(F(f"x:{n}*x, y:-{m}*y"), E(f"x^{m}*y^{n}")).is_zero()


def test_lie_y_is_one():
    assert lie(F("x:x, y:1"), E("y")) == 1


@given(poly_fields(), exp_functions(), exp_functions())
def test_lie_is_derivation(X, f, g):
    assert lie(X, f * g) == lie(X, f) * g + f * lie(X, g)


@given(poly_fields(1), poly_fields(1), exp_functions())
def test_bracket_is_commutator(X, Y, f):
    assert lie(bracket(X, Y), f) == lie(X, lie(Y, f)) - lie(Y, lie(X, f))


# isolated singularities ------------------------------------------------------
@pytest.mark.parametrize("text,expected", [
    ("x:x^2, y:x*y", False),
    ("x:x^2, y:-(x*y-1)", True),
    ("x:x, y:1", True),
])
def test_isolated_singularities(text, expected):
    assert has_isolated_singularities(F(text)) is expected


def test_isolated_singularities_zero_field():
    with pytest.raises(FieldError):
        has_isolated_singularities(PlanarField.zero())


# invariant curves ------------------------------------------------------------
def test_invariant_axis_for_B_family():
    m, n, c = 1, 2, 1
    Y = F(f"x:x^{1 + m}*y^{n - 1}, y:-({m}*x^{m}*y^{n} - {c})")
    assert is_invariant_curve(Y, E("x").as_laurent())


def test_not_invariant():
    assert not is_invariant_curve(F("x:x, y:1"), E("y").as_laurent())


def test_cofactor_hand_expansion():
    k = invariant_cofactor(F("x:x^2, y:-(2*x*y+1)"), E("x*y+1").as_laurent())
    assert k == E("-x").as_laurent()


@given(poly_fields(), laurent(0, 2, 3))
def test_cofactor_exact_when_returned(Y, h):
    if h.is_constant():
        return
    k = invariant_cofactor(Y, h)
    Yh = lie(Y, ExpPoly.from_rational(RationalFn2(h)))
    if k is None:
        assert not is_invariant_curve(Y, h)
    else:
        assert Yh == ExpPoly.from_rational(RationalFn2(k * h))


@given(poly_fields(), laurent(0, 1, 3))
def test_planted_invariant_curve(Y0, h):
    # Y = h Y0 + (Y0 h) * (something) always keeps h invariant: use Y = h * Y0
    if h.is_constant():
        return
    Y = Y0.scale(ExpPoly.from_rational(RationalFn2(h)))
    if Y.is_zero():
        return
    assert is_invariant_curve(Y, h)


# automorphisms ---------------------------------------------------------------
def test_pullback_translation():
    phi = PolyMap((E("x"), E("y + x^2")), (E("x"), E("y - x^2")))
    assert pullback_automorphism(F("x:0, y:1"), phi) == F("x:0, y:1")


def test_pullback_swap():
    phi = PolyMap((E("y"), E("x")), (E("y"), E("x")))
    assert pullback_automorphism(F("x:x, y:1"), phi) == F("x:1, y:y")


def test_pullback_rejects_bad_inverse():
    with pytest.raises(FieldError):
        pullback_automorphism(F("x:1, y:0"), PolyMap((E("x"), E("y + x")), (E("x"), E("y + x"))))


def test_inversion_true_pullback():
    X = F("x:x^2*exp(-y), y:x*exp(-y)")
    phi = PolyMap((E("1/x"), E("1/y")), (E("1/x"), E("1/y")))
    assert pullback_automorphism(X, phi) == F("x:-exp(-1/y), y:-x^-1*y^2*exp(-1/y)")


@given(poly_fields(1), poly_fields(1), st.integers(-2, 2), st.integers(0, 2))
def test_pullback_preserves_brackets(X, Y, c, d):
    phi = PolyMap((E("x"), E(f"y + {c}*x^{d}")), (E("x"), E(f"y - {c}*x^{d}")))
    lhs = pullback_automorphism(bracket(X, Y), phi)
    rhs = bracket(pullback_automorphism(X, phi), pullback_automorphism(Y, phi))
    assert lhs == rhs


# the chart map H ------------------------------------------------------------------
@pytest.mark.parametrize("args,msg", [
    ((2, 2, 0, "0"), "coprimality"),
    ((1, 1, 1, "1 + x"), "degree bound"),
    ((1, 1, 2, "x"), "p(0)"),
    ((1, 1, 0, "1"), "vanish"),
])
def test_hmap_validation(args, msg):
    with pytest.raises(FieldError, match=msg.replace("(", r"\(").replace(")", r"\)")):
        HMap(*args)


@pytest.mark.parametrize("m,n,l,p", [(1, 1, 0, "0"), (2, 3, 0, "0"), (1, 1, 1, "1"), (3, 2, 2, "1 - x"), (1, -2, 1, "2")])
def test_R_composed_with_H_is_power_of_v(m, n, l, p):
    from campo.exprcore import substitute
    H = HMap(m, n, l, p)
    xi, yi = H.images()
    out = substitute(ExpPoly.from_rational(H.R()), {"x": xi, "y": yi}, UV)
    assert out == ExpPoly.from_rational(RationalFn2(LaurentPoly2.var("v", UV)) ** n)


def test_pullback_of_monomial_field():
    X = F("x:x^2*y, y:-x*y^2")
    assert pullback_H(X, HMap(1, 1)) == PlanarField(E("u*v", UV), E("0", UV), UV)


def test_pullback_of_b11_field():
    X = F("x:x^2*exp(-x*y), y:(1-x*y)*exp(-x*y)")
    assert pullback_H(X, HMap(1, 1)) == PlanarField(E("u^2*exp(-v)", UV), E("u*exp(-v)", UV), UV)


def test_pushforward_of_radial_field():
    assert pushforward_H(PlanarField(E("u", UV), E("0", UV), UV), HMap(1, 1)) == F("x:x, y:-y")


@given(poly_fields(2), st.sampled_from([(1, 1, 0, "0"), (2, 1, 0, "0"), (1, 2, 1, "1"), (1, 1, 2, "1 + x"), (2, -1, 1, "1")]))
def test_pullback_pushforward_identity(X, hp):
    H = HMap(*hp)
    assert pushforward_H(pullback_H(X, H), H) == X


def test_hmap_json():
    assert HMap(1, 2, 1, "3").to_json() == {"m": 1, "n": 2, "l": 1, "p": "3"}
