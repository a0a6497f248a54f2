"""Closed-form flows of the families and numeric continuation in complex time."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

from .exprcore import CNum, ExpPoly, LaurentPoly2
from .families import FamilyError, FamilySpec, build, pullback_f
from .fields import PlanarField, lie

__all__ = [
    "CPoint", "FlowTrace", "FlowError", "ExactFlow", "exact_flow", "exact_flow_fn", "numeric_flow",
    "completeness_probe", "ProbeSummary", "RayResult", "BLOWUP_NORM", "UNDERFLOW_FACTOR",
]

BLOWUP_NORM = 1e12
UNDERFLOW_FACTOR = 1e-14
BRANCH_EPS = 1e-12


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class CPoint:
    x: complex
    y: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))
        if not all(math.isfinite(v) for v in (self.x.real, self.x.imag, self.y.real, self.y.imag)):
            raise FlowError("CPoint components must be finite")

    @classmethod
    def parse(cls, text: str) -> "CPoint":
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 2:
            raise FlowError(f"expected 'x,y', got {text!r}")
        try:
            return cls(complex(parts[0].replace("i", "j")), complex(parts[1].replace("i", "j")))
        except ValueError:
            raise FlowError(f"cannot read complex numbers from {text!r}") from None

    def __iter__(self):
        yield self.x
        yield self.y

    def norm(self) -> float:
        return max(abs(self.x), abs(self.y))

    def to_json(self):
        return {"x": [self.x.real, self.x.imag], "y": [self.y.real, self.y.imag]}


def _c(z: complex):
    return [z.real, z.imag]


@dataclass
class FlowTrace:
    """Accepted steps of a numeric continuation along a piecewise-linear path."""

    path: List[complex]
    times: List[complex] = field(default_factory=list)
    points: List[CPoint] = field(default_factory=list)
    status: str = "completed"
    status_time: Optional[complex] = None
    conserved_drift: Optional[float] = None
    rejected: int = 0

    @property
    def final(self) -> CPoint:
        return self.points[-1]

    def to_json(self) -> dict:
        return {
            "path": [_c(t) for t in self.path], "status": self.status,
            "status_time": None if self.status_time is None else _c(self.status_time),
            "conserved_drift": self.conserved_drift, "accepted": len(self.points) - 1, "rejected": self.rejected,
            "final": self.points[-1].to_json() if self.points else None,
        }

    def to_jsonl(self) -> str:
        """One JSON object per accepted step (the first line is the initial point)."""
        lines = [json.dumps({"t": _c(t), "x": _c(p.x), "y": _c(p.y)}) for t, p in zip(self.times, self.points)]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4)
# ---------------------------------------------------------------------------
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))
# PI controller constants
_SAFETY, _ALPHA, _BETA = 0.9, 0.17, 0.04
_FAC_MIN, _FAC_MAX = 0.2, 10.0


class _Blowup(Exception):
    pass


def _rhs(F, scale):
    def g(z):
        try:
            a, b = F(z[0], z[1])
        except (OverflowError, ZeroDivisionError, ValueError):
            raise _Blowup() from None
        return (scale * a, scale * b)

    return g


def _finite_small(z) -> bool:
    for v in z:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)) or abs(v) > BLOWUP_NORM:
            return False
    return True


def _evaluator(X):
    if isinstance(X, PlanarField):
        return X.evaluator()
    return X


def _invariant_fn(inv):
    if inv is None:
        return None
    if isinstance(inv, ExpPoly):
        c = inv.compile()
        return lambda p: c(p.x, p.y)
    if hasattr(inv, "eval") and hasattr(inv, "vars"):
        return lambda p: inv.eval(p.x, p.y)
    return lambda p: inv(p.x, p.y)


def numeric_flow(X, z0, path: Sequence[complex], tol: float = 1e-10, invariant=None, max_steps: int = 200000) -> FlowTrace:
    """Continue the solution of ``z' = X(z)`` along straight segments between the path nodes.

    Status is ``blowup`` when a component exceeds 1e12 in modulus (or the
    field cannot be evaluated) and ``step-underflow`` when the step drops
    below 1e-14 times the segment length.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z0 = z0 if isinstance(z0, CPoint) else CPoint(*z0)
    path = [complex(t) for t in path]
    if len(path) < 2:
        raise ValueError("path needs at least two nodes")
    F = _evaluator(X)
    inv = _invariant_fn(invariant)
    trace = FlowTrace(path, [path[0]], [z0])
    I0 = inv(z0) if inv else None
    drift = 0.0
    z = (z0.x, z0.y)
    steps = 0
    for ta, tb in zip(path[:-1], path[1:]):
        d = tb - ta
        L = abs(d)
        if L == 0:
            continue
        g = _rhs(F, d / L)
        s = 0.0
        h = min(L, 0.01 * L + 0.01)
        err_prev = 1.0
        try:
            k1 = g(z)
        except _Blowup:
            trace.status, trace.status_time = "blowup", ta
            break
        done = True
        while s < L:
            if steps >= max_steps:
                trace.status, trace.status_time = "step-underflow", ta + d * (s / L)
                done = False
                break
            if h < UNDERFLOW_FACTOR * L:
                trace.status, trace.status_time = "step-underflow", ta + d * (s / L)
                done = False
                break
            h = min(h, L - s)
            try:
                ks = [k1]
                for i in range(1, 7):
                    zi = tuple(z[c] + h * sum(a * k[c] for a, k in zip(_A[i], ks)) for c in range(2))
                    if not _finite_small(zi):
                        raise _Blowup()
                    ks.append(g(zi))
                znew = zi  # stage 7 point is the 5th-order solution (FSAL)
                errv = [h * sum(e * k[c] for e, k in zip(_E, ks)) for c in range(2)]
                err = max(abs(errv[c]) / (tol + tol * max(abs(z[c]), abs(znew[c]))) for c in range(2))
            except _Blowup:
                h *= 0.25
                trace.rejected += 1
                if h < UNDERFLOW_FACTOR * L:
                    trace.status, trace.status_time = "blowup", ta + d * (s / L)
                    done = False
                    break
                continue
            if err <= 1.0:
                s += h
                z = znew
                k1 = ks[6]
                steps += 1
                t_now = ta + d * (s / L) if s < L else tb
                p = CPoint(*z)
                trace.times.append(t_now)
                trace.points.append(p)
                if inv:
                    val = inv(p)
                    drift = max(drift, abs(val - I0) / (abs(I0) if I0 else 1.0))
                if max(abs(z[0]), abs(z[1])) > BLOWUP_NORM:
                    trace.status, trace.status_time = "blowup", t_now
                    done = False
                    break
                fac = _SAFETY * max(err, 1e-10) ** (-_ALPHA) * err_prev ** _BETA
                err_prev = max(err, 1e-4)
                h *= min(_FAC_MAX, max(_FAC_MIN, fac))
            else:
                trace.rejected += 1
                h *= max(_FAC_MIN, _SAFETY * err ** (-_ALPHA))
        if not done:
            break
    trace.conserved_drift = drift if inv else None
    return trace


# ---------------------------------------------------------------------------
# completeness probe
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RayResult:
    theta: float
    status: str
    radius: float
    drift: Optional[float]
    steps: int

    def to_json(self):
        return {"theta": self.theta, "status": self.status, "radius": self.radius, "drift": self.drift, "steps": self.steps}


@dataclass(frozen=True)
class ProbeSummary:
    rays: List[RayResult]

    @property
    def blowup(self) -> bool:
        return any(r.status == "blowup" for r in self.rays)

    @property
    def all_completed(self) -> bool:
        return all(r.status == "completed" for r in self.rays)

    @property
    def max_drift(self) -> Optional[float]:
        ds = [r.drift for r in self.rays if r.drift is not None]
        return max(ds) if ds else None

    def to_json(self):
        return {"blowup": self.blowup, "all_completed": self.all_completed, "max_drift": self.max_drift,
                "rays": [r.to_json() for r in self.rays]}


def completeness_probe(X, z0, Rmax: float, nrays: int = 8, tol: float = 1e-10, invariant=None) -> ProbeSummary:
    """Continue along the rays ``t = r e^{2 pi i j / nrays}``, ``0 <= r <= Rmax``.

    A blowup certifies incompleteness; all rays completing is only evidence.
    """
    if nrays < 4:
        raise ValueError("nrays must be >= 4")
    rays = []
    for j in range(nrays):
        theta = 2 * math.pi * j / nrays
        end = Rmax * cmath.exp(1j * theta)
        tr = numeric_flow(X, z0, [0, end], tol, invariant)
        radius = abs(tr.status_time) if tr.status_time is not None else Rmax
        rays.append(RayResult(theta, tr.status, radius, tr.conserved_drift, len(tr.points) - 1))
    return ProbeSummary(rays)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------
def _uni_eval(u, z: complex) -> complex:
    return sum(complex(c) * z ** k for k, c in u.coeffs.items()) + 0j


@dataclass(frozen=True)
class ExactFlow:
    """Closed-form flow ``(z0, t) -> z(t)`` of a family member."""

    spec: FamilySpec
    formula: Callable[[CPoint, complex], CPoint]

    def __call__(self, z0, t) -> CPoint:
        z0 = z0 if isinstance(z0, CPoint) else CPoint(*z0)
        return self.formula(z0, complex(t))


def _expm1_over(A: complex, t: complex) -> complex:
    """``(e^{A t} - 1) / A``, continuous at A = 0."""
    z = A * t
    if abs(z) < 1e-5:
        return t * (1 + z / 2 + z * z / 6 + z ** 3 / 24)
    return (cmath.exp(z) - 1) / A


def exact_flow_fn(spec: FamilySpec) -> ExactFlow:
    t, p = spec.tag, spec.params
    build(spec)
    if t == "S1":
        a, b = p["a"].compile(), p["b"].compile()

        def f(z0, s):
            A, B = a(z0.x, 0), b(z0.x, 0)
            return CPoint(z0.x, cmath.exp(A * s) * z0.y + B * _expm1_over(A, s))

        return ExactFlow(spec, f)
    if t == "S2":
        lam, mu = complex(p["lambda"]), complex(p["mu"])
        return ExactFlow(spec, lambda z0, s: CPoint(z0.x * cmath.exp(lam * s), z0.y * cmath.exp(mu * s)))
    if t == "S3":
        lam, m = complex(p["lambda"]), p["m"]
        return ExactFlow(spec, lambda z0, s: CPoint(z0.x * cmath.exp(lam * s), cmath.exp(lam * m * s) * (z0.y + z0.x ** m * s)))
    if t == "S4":
        lam, m, n = p["lambda"], p["m"], p["n"]

        def f(z0, s):
            L = _uni_eval(lam, z0.x ** m * z0.y ** n)
            return CPoint(z0.x * cmath.exp(n * L * s), z0.y * cmath.exp(-m * L * s))

        return ExactFlow(spec, f)
    if t == "S5":
        lam, m, n, l, pp = p["lambda"], p["m"], p["n"], p["l"], p["p"]

        def f(z0, s):
            if z0.x == 0:
                raise FlowError("S5 closed form excludes the line x = 0")
            w0 = z0.x ** l * z0.y + _uni_eval(pp, z0.x)
            L = _uni_eval(lam, z0.x ** m * w0 ** n)
            x = z0.x * cmath.exp(n * L * s)
            w = w0 * cmath.exp(-m * L * s)
            return CPoint(x, (w - _uni_eval(pp, x)) / x ** l)

        return ExactFlow(spec, f)
    if t in ("B", "A_II", "A_III"):
        return _chart_flow(spec)
    raise FlowError(f"no closed-form flow for family {t}")


def _chart_flow(spec: FamilySpec) -> ExactFlow:
    from .riccati import RiccatiError, extract_uv_form

    fpar = spec.params["f"]
    if fpar is None:
        raise FlowError("closed-form flow needs f")
    Y = build(spec)
    H = spec.hmap()
    try:
        form = extract_uv_form(Y, H)
    except RiccatiError as exc:
        raise FlowError(str(exc)) from None
    if form.c and form.N is None:
        raise FlowError("closed-form chart flow needs c(v) = c v^N")
    N = form.N if form.c else None
    c = complex(form.c0) if form.c else 0j
    uv = ("u", "v")
    M = pullback_f(fpar, H) * ExpPoly.from_rational(LaurentPoly2.monomial(form.k, 0, 1, uv))
    Zc = PlanarField(ExpPoly.from_rational(form.a.to_laurent(uv, index=1).shift(1, 0)),
                     ExpPoly.from_rational(form.c.to_laurent(uv, index=1)), uv)
    if not lie(Zc, M).is_zero():
        raise FlowError("the chart multiplier f(H) u^k is not a first integral of the chart field")
    Mc = M.compile()
    m, n, shift = H.m, H.n, H.shift
    acoef = {k: complex(v) for k, v in form.a.coeffs.items()}
    pp = H.p

    def flow(z0: CPoint, s: complex) -> CPoint:
        if z0.x == 0:
            raise FlowError("chart flow excludes the line x = 0")
        u0 = z0.x ** (1 / n)
        v0 = u0 ** shift * z0.y + u0 ** m * _uni_eval(pp, z0.x)
        try:
            M0 = Mc(u0, v0)
        except (ZeroDivisionError, OverflowError):
            raise FlowError("initial point lies on a pole of f") from None
        if N is None:
            # c = 0: v is constant
            expo = M0 * s * sum(ak * v0 ** k for k, ak in acoef.items())
            u1, v1 = u0 * cmath.exp(expo), v0
        else:
            # Lg is log(v1 / v0) continued along the time segment
            if N == 0:
                v1 = v0 + M0 * c * s
                if -1 in acoef:
                    _check_branch(v0, v1)
                    Lg = cmath.log(v1 / v0) if v1 != v0 else 0j
            elif N == 1:
                Lg = M0 * c * s
                v1 = v0 * cmath.exp(Lg)
            else:
                if v0 == 0:
                    v1, Lg = 0j, None
                else:
                    base = 1 + (1 - N) * c * v0 ** (N - 1) * M0 * s
                    _check_branch(1 + 0j, base)
                    Lg = cmath.log(base) / (1 - N)
                    v1 = v0 * cmath.exp(Lg)
            expo = 0j
            for k, ak in acoef.items():
                e = k - N + 1
                if e == 0:
                    if Lg is None:
                        raise FlowError("chart flow starts on the branch point v = 0")
                    expo += ak / c * Lg
                else:
                    expo += ak / c * (v1 ** e - v0 ** e) / e
            u1 = u0 * cmath.exp(expo)
        x = u1 ** n
        y = u1 ** (-shift) * (v1 - u1 ** m * _uni_eval(pp, x))
        return CPoint(x, y)

    return ExactFlow(spec, flow)


def _check_branch(v0: complex, v1: complex):
    d = v1 - v0
    if d == 0:
        return
    tt = max(0.0, min(1.0, -((v0 * d.conjugate()).real) / abs(d) ** 2))
    if abs(v0 + tt * d) < BRANCH_EPS:
        raise FlowError("segment passes through the branch point v = 0")


def exact_flow(spec: FamilySpec, z0, t) -> CPoint:
    return exact_flow_fn(spec)(z0, t)
