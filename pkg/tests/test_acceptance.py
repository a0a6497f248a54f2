"""Acceptance criteria, one recorded line per criterion (see the terminal summary)."""
import cmath
import random
import time
from itertools import product
from math import gcd

import pytest
import sympy

from campo.exprcore import ExpPoly, RationalFn2, UniPoly, parse
from campo.families import (FamilyError, FamilySpec, build, build_full, check_theoremA_relation, condition_star,
                            decompose)
from campo.fields import HMap, PlanarField, PolyMap, lie, parse_field, pullback_H, pullback_automorphism
from campo.flows import CPoint, completeness_probe, exact_flow, numeric_flow
from campo.integrals import darboux_structured, is_first_integral, rational_first_integral, second_integral_report
from campo.riccati import (RiccatiError, UVForm, build_Y_from_uv, eta_contraction, eta_form, extract_uv_form,
                           solve_k, time_form, verify_time_contraction)

from strategies import random_a_spec

XY, UV = ("x", "y"), ("u", "v")
SEED = 20240611


def E(t, vars=XY):
    return parse(t, vars)


# 1 -------------------------------------------------------------------------------
COPRIME = [(m, n) for m in range(1, 5) for n in range(1, 5) if gcd(m, n) == 1]
LAMBDAS = ["0", "2", "z - 1", "z^2 + 3*z - 2", "-z^3 + z + 1", "z", "z^2", "z^3 - z^2", "z^3"]
P_BY_L = {1: ["1", "-2"], 2: ["1 + x", "3 - 2*x"], 3: ["1 - x + x^2", "2 + x^2"]}


def _order(lam):
    return 10 ** 6 if lam == "0" else UniPoly.from_laurent(E(lam.replace("z", "x")).as_laurent(), "x").ord()


def test_first_integral_identities(criterion):
    start, count, bad = time.perf_counter(), 0, []
    for (m, n), lam in product(COPRIME, LAMBDAS):
        spec = FamilySpec("S4", {"m": m, "n": n, "lambda": lam})
        count += 1
        if not lie(build(spec), E(f"x^{m}*y^{n}")).is_zero():
            bad.append(spec)
    for (m, n), l, lam in product(COPRIME, (1, 2, 3), LAMBDAS):
        if m * _order(lam) < l:
            continue
        for p in P_BY_L[l]:
            spec = FamilySpec("S5", {"m": m, "n": n, "l": l, "p": p, "lambda": lam})
            count += 1
            if not lie(build(spec), E(f"x^{m}*(x^{l}*y + ({p}))^{n}")).is_zero():
                bad.append(spec)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    criterion(1, ok, f"{count} S4/S5 instances exact, {elapsed:.2f}s (< 5s)")
    assert not bad, bad[:3]
    assert elapsed < 5


# 2 -------------------------------------------------------------------------------
def _uv_built(rng):
    """Fields built from u^k(a u d/du + c v^N d/dv) with N >= 1, plus F = 1/(x^delta R^kappa)."""
    out = []
    hmaps = [HMap(1, 1), HMap(2, 1), HMap(1, 2), HMap(1, 1, 1, "1"), HMap(2, 1, 1, "-2"), HMap(3, 2, 1, "1")]
    while len(out) < 20:
        H = rng.choice(hmaps)
        kappa, delta = rng.randint(0, 1), rng.randint(-1, 2)
        N, k = 1 + H.n * kappa, H.n * delta
        c0 = rng.choice([-2, -1, 1, 3])
        form = UVForm(k, UniPoly({0: rng.randint(1, 3)}, "v"), UniPoly({N: c0}, "v"), H)
        try:
            Y = build_Y_from_uv(form)
        except RiccatiError:
            continue
        F = RationalFn2(E(f"x^{-delta}").as_laurent()) / H.R() ** kappa
        out.append((H, c0, F, Y))
    return out


def test_A_relation(criterion):
    rng = random.Random(SEED)
    specs = [random_a_spec(rng) for _ in range(60)]
    bad = []
    for s in specs:
        Omega, j = check_theoremA_relation(s)
        d = decompose(s)
        rhs = ExpPoly.from_rational(d.R ** j).scale(Omega) if j else ExpPoly.const(Omega, XY)
        if lie(d.FY(), ExpPoly.from_rational(d.R)) != rhs:
            bad.append(s)
    built = _uv_built(rng)
    wrong_omega = [(H, c0) for H, c0, F, Y in built
                   if lie(Y.scale(ExpPoly.from_rational(F)), ExpPoly.from_rational(H.R()))
                   != ExpPoly.from_rational(H.R()).scale(H.n * c0)]
    tags = sorted({s.tag for s in specs})
    ok = not bad and not wrong_omega
    criterion(2, ok, f"{len(specs)} random instances over {'/'.join(tags)}; Omega = n c on {len(built)} built fields")
    assert not bad and not wrong_omega


# 3 -------------------------------------------------------------------------------
def _star_oracle(lam, m, n, l, p, a):
    x, y, z = sympy.symbols("x y z")
    pe = sympy.sympify(p.replace("^", "**"), locals={"x": x})
    R = x ** m * (x ** l * y + pe) ** n
    lamR = sympy.sympify(lam.replace("^", "**"), locals={"z": z}).subs(z, R)
    e = sympy.expand(lamR * (m * pe + n * x * sympy.diff(pe, x)) - a * pe)
    return e == 0 or all(mon[0] >= l for mon in sympy.Poly(e, x, y).monoms())


def _validator(lam, m, n, l, p, a):
    spec = FamilySpec("BIII", {"m": m, "n": n, "l": l, "p": p, "a": a, "lambda": lam})
    expr, q = condition_star(spec["lambda"], m, n, l, spec["p"], spec["a"])
    try:
        build(spec)
        accepted = True
    except FamilyError as exc:
        if exc.condition != "condition-star":
            raise
        accepted = False
    assert accepted == (q is not None)
    return accepted


def test_condition_star_oracle(criterion):
    rng = random.Random(SEED)
    cases = []
    for a in (-2, -1, 0, 1, 3):
        cases += [(f"{a} + z", 1, 1, 1, "1", a, True), (f"{a + 1} + z", 1, 1, 1, "1", a, False)]
    for _ in range(20):
        l = rng.randint(1, 2)
        p = "1" if l == 1 else rng.choice(["1", "1 + x", "2 - x"])
        lam = " + ".join(f"({rng.randint(-2, 2)})*z^{k}" for k in range(rng.randint(1, 3)))
        cases.append((lam, 1, 1, l, p, rng.randint(-2, 2), None))
    bad = []
    for lam, m, n, l, p, a, expected in cases:
        oracle = _star_oracle(lam, m, n, l, p, a)
        got = _validator(lam, m, n, l, p, a)
        if got != oracle or (expected is not None and got != expected):
            bad.append((lam, l, p, a))
    criterion(3, not bad, f"{len(cases)} BIII validations agree with the ideal-membership oracle")
    assert not bad


# 4 -------------------------------------------------------------------------------
@pytest.mark.parametrize("field,expected", [
    ("x:x^2, y:-(2*x*y + 1)", "x*(x*y + 1)"),
    ("x:2*x, y:-3*y", "x^3*y^2"),
])
def test_darboux_pipeline(criterion, field, expected):
    darboux_structured(parse_field("x:x, y:-y"), 1)
    Y = parse_field(field)
    start = time.perf_counter()
    R = rational_first_integral(Y, darboux_structured(Y, 1))
    elapsed = time.perf_counter() - start
    ok = (R is not None and R == RationalFn2(E(expected).as_laurent())
          and is_first_integral(Y, ExpPoly.from_rational(R)) and elapsed < 1)
    criterion(4, ok, f"{field} -> {R.to_expr() if R is not None else None} in {elapsed:.2f}s")
    assert ok


# 5 -------------------------------------------------------------------------------
def _b_display(m, n):
    spec = FamilySpec("B", {"m": m, "n": n, "c": 1, "a": f"z^{n - 1}", "f": f"exp(-({m}/{n})*x^{m}*y^{n})"})
    shown = parse_field(f"x:x^{1 + m}*y^{n - 1}, y:-({m}*x^{m}*y^{n} - 1)")
    chart = PlanarField(E(f"u^{m + 1}*v^{n - 1}*exp(-({m}/{n})*v^{n})", UV), E(f"u^{m}*exp(-({m}/{n})*v^{n})", UV), UV)
    return spec, shown, chart


B_DISPLAY_CASES = [(1, 1), (2, 1),
             pytest.param(1, 2, marks=pytest.mark.xfail(strict=True, reason="displayed field drops the factor n on d/dx"))]


@pytest.mark.parametrize("m,n", B_DISPLAY_CASES)
def test_b_display_field(criterion, m, n):
    spec, shown, _ = _b_display(m, n)
    Y = build(spec)
    ok = Y == shown
    criterion(5, ok, f"build (m,n)=({m},{n}) equals displayed field", expected_failure=(m, n) == (1, 2))
    assert ok, Y


def test_b_true_field_for_n_two():
    assert build(_b_display(1, 2)[0]) == parse_field("x:2*x^2*y, y:1 - x*y^2")


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
def test_b_display_chart(criterion, m, n):
    spec, _, chart = _b_display(m, n)
    HX = pullback_H(build_full(spec), spec.hmap())
    ok = HX == chart
    criterion(5, ok, f"pullback_H (m,n)=({m},{n}) equals displayed product form")
    assert ok, HX


# 6 -------------------------------------------------------------------------------
INVERSION = PolyMap((E("1/x"), E("1/y")), (E("1/x"), E("1/y")))
EX1_X = parse_field("x:x^2*exp(-y), y:x*exp(-y)")


def test_x_exp_minus_y_first_integral(criterion):
    ok = lie(parse_field("x:x, y:1"), E("x*exp(-y)")).is_zero()
    criterion(6, ok, "x e^(-y) is a first integral of x d/dx + d/dy")
    assert ok


@pytest.mark.xfail(strict=True, reason="displayed inversion pullback differs from the computed one")
def test_inversion_display(criterion):
    shown = parse_field("x:x*exp(-1/y)/(x*y), y:-y^2*exp(-1/y)/(x*y)")
    ok = pullback_automorphism(EX1_X, INVERSION) == shown
    criterion(6, ok, "inversion pullback equals displayed e^(-1/y)/(xy)(x d/dx - y^2 d/dy)", expected_failure=True)
    assert ok


def test_inversion_true():
    assert pullback_automorphism(EX1_X, INVERSION) == parse_field("x:-exp(-1/y), y:-x^-1*y^2*exp(-1/y)")


# 7 -------------------------------------------------------------------------------
def _compose(cs, I):
    out = ExpPoly.zero(XY)
    for k, c in enumerate(cs):
        if c:
            out = out + (I ** k).scale(c)
    return out


def test_second_integral_law(criterion):
    rng = random.Random(SEED)
    specs = [random_a_spec(rng) for _ in range(60)]
    bad = [s for s in specs if not lie(decompose(s).FY(), lie(decompose(s).FY(), decompose(s).G)).is_zero()]
    splits = 0
    for _ in range(10):
        lam = rng.randint(-2, 2)
        Y = parse_field(f"x:{lam}*x, y:1")
        I = E(f"x*exp({-lam}*y)")
        h = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
        g = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
        Hp, Gp = _compose(h, I), _compose(g, I)
        r = second_integral_report(Y, Hp * E("y") + Gp)
        splits += r.is_second and r.Hpart == Hp and r.Gpart == Gp
    ok = not bad and splits == 10
    criterion(7, ok, f"law on {len(specs)} decompositions; {splits}/10 splits recovered")
    assert ok


# 8 -------------------------------------------------------------------------------
A_FIXTURES = [
    FamilySpec("A_II", {"m": 1, "n": 1, "lambda": "-1", "a": 1}),
    FamilySpec("A_II", {"m": 2, "n": 1, "lambda": "-2", "a": 2}),
    FamilySpec("A_II", {"m": 1, "n": 2, "lambda": "-1/2", "a": 1}),
    FamilySpec("A_II", {"m": 1, "n": 1, "lambda": "z^-1", "a": 1, "kappa": 1}),
    FamilySpec("A_II", {"m": 1, "n": 1, "lambda": "z^-1 + 2", "a": 1, "kappa": 1}),
    FamilySpec("A_III", {"m": 1, "n": 1, "l": 1, "p": "1", "lambda": "1", "a": 1}),
    FamilySpec("A_III", {"m": 1, "n": 1, "l": 1, "p": "-1", "lambda": "1 + z", "a": 1}),
    FamilySpec("A_III", {"m": 1, "n": 2, "l": 1, "p": "1", "lambda": "1 + z", "a": 1}),
    FamilySpec("A_III", {"m": 1, "n": 1, "l": 2, "p": "1", "lambda": "1", "a": 1}),
    FamilySpec("A_III", {"m": 1, "n": 2, "l": 2, "p": "-1", "lambda": "1", "a": 1}),
]
B_FIXTURES = [
    FamilySpec("B", {"m": 1, "n": 1, "c": 1, "a": "1"}),
    FamilySpec("B", {"m": 2, "n": 1, "c": 1, "a": "1"}),
    FamilySpec("B", {"m": 1, "n": 2, "c": 1, "a": "z"}),
    FamilySpec("B", {"m": 3, "n": 1, "c": -2, "a": "1 + z"}),
    FamilySpec("B", {"m": 1, "n": 1, "l": 1, "p": "1", "c": 1, "a": "1"}),
    FamilySpec("B", {"m": 2, "n": 1, "l": 1, "p": "-1", "c": 3, "a": "2 - z"}),
    FamilySpec("B", {"m": 1, "n": 1, "l": 2, "p": "1 + x", "c": 1, "a": "1"}),
]


def test_exponent_identity(criterion):
    checked, bad = 0, []
    for spec in A_FIXTURES:
        Y, H = build(spec), spec.hmap()
        form = extract_uv_form(Y, H)
        _, shape = eta_contraction(Y, H)
        checked += 1
        if solve_k(shape, H, form.N) != form.k:
            bad.append(spec)
    for spec in B_FIXTURES:
        Y, H = build(spec), spec.hmap()
        _, shape = eta_contraction(Y, H)
        checked += 1
        if not (solve_k(shape, H) == H.m + H.n * H.l == extract_uv_form(Y, H).k):
            bad.append(spec)
    criterion(8, not bad, f"solve_k exact on {len(A_FIXTURES)} A_II/A_III and {len(B_FIXTURES)} B fixtures")
    assert not bad, bad


# 9 -------------------------------------------------------------------------------
FLOW_SPECS = [
    FamilySpec("S1", {"a": "x + 1", "b": "x^2"}),
    FamilySpec("S1", {"a": "0", "b": "x"}),
    FamilySpec("S2", {"lambda": "1 + i", "mu": -2}),
    FamilySpec("S2", {"lambda": "1/3", "mu": "1/2"}),
    FamilySpec("S3", {"lambda": "1/2", "m": 2}),
    FamilySpec("S3", {"lambda": -1, "m": 0}),
    FamilySpec("S4", {"lambda": "z + 1", "m": 2, "n": 1}),
    FamilySpec("S4", {"lambda": "z^2 - 1", "m": 1, "n": 2}),
]
EX2 = FamilySpec("B", {"m": 1, "n": 1, "c": 1, "a": "1", "f": "exp(-x*y)"})


def test_flow_cross_validation(criterion):
    start = time.perf_counter()
    worst, runs = 0.0, 0
    z0 = CPoint(0.7 + 0.2j, 0.5 - 0.1j)
    for spec in FLOW_SPECS:
        Y = build(spec)
        for r, theta in product((1.0, 2.0), (0.0, 1.1, 2.3, 3.6, 4.9)):
            T = r * cmath.exp(1j * theta)
            e = exact_flow(spec, z0, T)
            tr = numeric_flow(Y, z0, [0, T], 1e-12)
            assert tr.status == "completed"
            runs += 1
            worst = max(worst, max(abs(a - b) / max(abs(b), 1e-3) for a, b in zip(tr.final, e)))
    drift = 0.0
    inv = E("x*exp(-x*y)")
    for theta in (0.0, 1.6, 3.1, 4.7):
        tr = numeric_flow(build_full(EX2), CPoint(1, 1), [0, 5 * cmath.exp(1j * theta)], 1e-12, inv)
        assert tr.status == "completed"
        drift = max(drift, tr.conserved_drift)
    probe = completeness_probe(parse_field("x:x^2, y:0"), CPoint(1, 0), 2, 8)
    ray0 = probe.rays[0]
    elapsed = time.perf_counter() - start
    ok = (worst < 1e-9 and drift < 1e-8 and probe.blowup and ray0.status == "blowup"
          and 0.9 <= ray0.radius <= 1.1 and elapsed < 30)
    criterion(9, ok, f"{runs} runs, max rel dev {worst:.1e}; drift {drift:.1e}; "
                     f"blowup radius {ray0.radius:.4f}; {elapsed:.1f}s (< 30s)")
    assert ok


# 10 ------------------------------------------------------------------------------
def _time_fixtures():
    out = [(EX2["f"], build(EX2), EX2.hmap())]
    for spec in B_FIXTURES:
        out.append((E("exp(x*y)"), build(spec), spec.hmap()))
    for spec in A_FIXTURES:
        out.append((E("1 + x^2*y"), build(spec), spec.hmap()))
    for H, _, F, Y in _uv_built(random.Random(SEED)):
        out.append((E("exp(-y)"), Y, H))
    return out


def test_time_form_identity(criterion):
    checked, skipped, bad = 0, 0, []
    for f, Y, H in _time_fixtures():
        A, B = eta_form(H)
        P, Q = Y.polynomial_components()
        if not (A * P + B * Q):
            skipped += 1
            continue
        tf = time_form(f, Y, H)
        checked += 1
        if not verify_time_contraction(tf, Y.scale(f)):
            bad.append((f, Y))
    criterion(10, not bad, f"tau(X) = 1 exactly on {checked} fixtures with eta(Y) != 0")
    assert not bad and checked >= 30
