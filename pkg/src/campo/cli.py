"""Command-line interface: ``campo <command> [options]``.

Exit status is 0 when every boolean verdict holds, 1 when one is false and
2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional

from .exprcore import ExpPoly, LaurentPoly2, ParseError, RationalFn2, parse
from .families import (FamilyError, FamilySpec, build, build_full, check_theoremA_relation, condition_star,
                       decompose, spec_R)
from .fields import FieldError, PlanarField, lie, parse_field
from .flows import CPoint, FlowError, completeness_probe, exact_flow_fn, numeric_flow
from .integrals import DarbouxSearch, darboux_kernel, darboux_structured, rational_first_integral, second_integral_report
from .riccati import (RiccatiError, eta_contraction, eta_form, extract_uv_form, hmap_from_R, time_form,
                      verify_time_contraction)

SCHEMA_VERSION = "1.0"
COMMANDS = ("validate-family", "first-integral", "second-integral", "darboux", "rational-integral", "uv-form",
            "eta", "time-form", "decompose", "flow", "probe")
FAMILY_PARAMS = ("lambda", "mu", "m", "n", "l", "p", "a", "b", "c", "d", "f", "N", "eps", "C", "A", "B",
                 "kappa", "delta")
XY = ("x", "y")


class InputError(ValueError):
    pass


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[Dict[str, Any]] = field(default_factory=list)
    certificates: Dict[str, Any] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)
    exit_code: int = 0

    def verdict(self, name: str, value):
        self.verdicts.append({"name": name, "value": value})

    def finish(self) -> "Report":
        if self.exit_code != 2:
            self.exit_code = 1 if any(v["value"] is False for v in self.verdicts) else 0
        return self

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "inputs": self.inputs,
                "verdicts": self.verdicts, "certificates": self.certificates, "diagnostics": self.diagnostics,
                "exit_code": self.exit_code}

    def to_text(self) -> str:
        out = [f"command: {self.command}"]
        out += [f"input {k}: {_fmt(v)}" for k, v in self.inputs.items()]
        out += [f"verdict {v['name']}: {_fmt(v['value'])}" for v in self.verdicts]
        for k, v in self.certificates.items():
            out.append(f"certificate {k}: {_fmt(v)}")
        out += [f"diagnostic: {d}" for d in self.diagnostics]
        out.append(f"exit: {self.exit_code}")
        return "\n".join(out)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "null" if v is None else str(v)


def load_schema() -> dict:
    return json.loads(resources.files("campo").joinpath("schema/report.schema.json").read_text())


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------
def _complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot read complex number {text!r}") from None


def _field(args) -> PlanarField:
    if args.field and args.field_file:
        raise InputError("give only one of --field and --field-file")
    if args.field:
        return parse_field(args.field)
    if args.field_file:
        try:
            with open(args.field_file) as fh:
                return PlanarField.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"cannot read field file {args.field_file!r}: {exc}") from None
    raise InputError("a field is required (--field or --field-file)")


def _family(args) -> Optional[FamilySpec]:
    if getattr(args, "family_file", None):
        try:
            with open(args.family_file) as fh:
                return FamilySpec.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read family file {args.family_file!r}: {exc}") from None
    if not getattr(args, "tag", None):
        return None
    params = {k: getattr(args, f"fam_{k}") for k in FAMILY_PARAMS if getattr(args, f"fam_{k}") is not None}
    return FamilySpec(args.tag, params)


def _need_family(args) -> FamilySpec:
    spec = _family(args)
    if spec is None:
        raise InputError("a family is required (--tag ... or --family-file)")
    return spec


def _fn(text: Optional[str], name="--fn") -> ExpPoly:
    if not text:
        raise InputError(f"{name} is required")
    return parse(text, XY)


def _rational(text: Optional[str], name="--R") -> RationalFn2:
    e = _fn(text, name)
    if not e.is_rational():
        raise InputError(f"{name} must be a rational function")
    return e.as_rational()


def _field_or_family(args, rep: Report, full: bool) -> PlanarField:
    spec = _family(args)
    if spec is not None:
        rep.inputs["family"] = spec.to_json()
        X = build_full(spec) if full else build(spec)
    else:
        X = _field(args)
    rep.inputs["field"] = X.to_text()
    return X


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_validate_family(args, rep: Report):
    spec = _need_family(args)
    rep.inputs["family"] = spec.to_json()
    try:
        Y = build(spec)
    except FamilyError as exc:
        rep.verdict("valid", False)
        rep.certificates["violated"] = exc.condition
        rep.diagnostics.append(str(exc))
        return
    rep.verdict("valid", True)
    rep.certificates["Y"] = Y.to_text()
    if spec.tag == "BIII":
        p = spec.params
        expr, quot = condition_star(p["lambda"], p["m"], p["n"], p["l"], p["p"], p["a"])
        rep.certificates["condition_star"] = {"expression": expr.to_expr(), "quotient": quot.to_expr()}
    if spec.params.get("f") is not None:
        rep.certificates["X"] = build_full(spec).to_text()


def cmd_first_integral(args, rep: Report):
    X = _field_or_family(args, rep, full=True)
    f = _fn(args.fn)
    rep.inputs["fn"] = f.to_expr()
    Xf = lie(X, f)
    rep.verdict("first_integral", Xf.is_zero())
    rep.certificates["lie_derivative"] = Xf.to_expr()


def cmd_second_integral(args, rep: Report):
    X = _field_or_family(args, rep, full=True)
    f = _fn(args.fn)
    rep.inputs["fn"] = f.to_expr()
    r = second_integral_report(X, f)
    rep.verdict("second_integral", r.is_second)
    rep.certificates["report"] = r.to_json()


def _darboux(args, rep: Report):
    Y = _field_or_family(args, rep, full=False)
    rep.inputs["lmax"] = args.lmax
    search = DarbouxSearch()
    try:
        certs = darboux_structured(Y, args.lmax, report=search)
    except FieldError as exc:
        raise InputError(str(exc)) from None
    rep.diagnostics.extend(search.diagnostics)
    rep.certificates["darboux"] = [c.to_json() for c in certs]
    return Y, certs


def cmd_darboux(args, rep: Report):
    Y, certs = _darboux(args, rep)
    rep.verdict("certificates_verified", all(c.verify(Y) for c in certs))
    rep.verdict("count", len(certs))
    rep.certificates["kernel"] = darboux_kernel(certs)


def cmd_rational_integral(args, rep: Report):
    Y, certs = _darboux(args, rep)
    R = rational_first_integral(Y, certs)
    rep.verdict("rational_first_integral", R is not None)
    if R is not None:
        rep.certificates["R"] = R.to_expr()
        rep.certificates["exponents"] = darboux_kernel(certs)[0]


def _chart_R(args, rep: Report):
    spec = _family(args)
    if spec is not None:
        rep.inputs["family"] = spec.to_json()
        Y = build(spec)
        R = spec_R(spec)
    else:
        Y = _field(args)
        R = _rational(args.R)
    rep.inputs["field"] = Y.to_text()
    rep.inputs["R"] = R.to_expr()
    return Y, R


def cmd_uv_form(args, rep: Report):
    Y, R = _chart_R(args, rep)
    H = hmap_from_R(R)
    rep.certificates["H"] = H.to_json()
    try:
        form = extract_uv_form(Y, H)
    except RiccatiError as exc:
        rep.verdict("riccati_adapted", False)
        rep.diagnostics.append(str(exc))
        return
    rep.verdict("riccati_adapted", True)
    rep.certificates["uv_form"] = form.to_json()


def cmd_eta(args, rep: Report):
    Y, R = _chart_R(args, rep)
    A, B = eta_form(R)
    rep.certificates["eta"] = {"dx": A.to_expr(), "dy": B.to_expr()}
    try:
        eY, shape = eta_contraction(Y, R)
    except RiccatiError as exc:
        rep.verdict("shape_found", False)
        rep.diagnostics.append(str(exc))
        return
    rep.verdict("shape_found", True)
    rep.certificates["eta_Y"] = eY.to_expr()
    rep.certificates["shape"] = shape.to_json()


def cmd_time_form(args, rep: Report):
    spec = _family(args)
    if spec is not None:
        rep.inputs["family"] = spec.to_json()
        Y = build(spec)
        R = spec_R(spec)
        f = spec.params.get("f") if args.fn is None else _fn(args.fn)
        if f is None:
            raise InputError("time-form needs f (family parameter --f or --fn)")
    else:
        Y = _field(args)
        R = _rational(args.R)
        f = _fn(args.fn)
    rep.inputs.update({"field": Y.to_text(), "R": R.to_expr(), "fn": f.to_expr()})
    tf = time_form(f, Y, R)
    rep.certificates["tau"] = tf.to_json()
    rep.verdict("contraction_is_one", verify_time_contraction(tf, Y.scale(f)))


def cmd_decompose(args, rep: Report):
    spec = _need_family(args)
    rep.inputs["family"] = spec.to_json()
    d = decompose(spec)
    cert = {"F": d.F.to_expr(), "Y": d.Y.to_text(), "R": d.R.to_expr(), "Omega": d.Omega.to_expr(), "j": d.j,
            "polynomial_Y": d.polynomial_Y.to_text(), "G": None if d.G is None else d.G.to_expr()}
    if d.chart is not None:
        cert["chart"] = d.chart.to_json()
    rep.certificates["decomposition"] = cert
    FY = d.FY()
    lhs = lie(FY, ExpPoly.from_rational(d.R))
    rhs = ExpPoly.from_rational(d.R ** d.j).scale(d.Omega) if d.j else ExpPoly.const(d.Omega, FY.vars)
    rep.verdict("relation_holds", lhs == rhs)
    if d.G is not None:
        rep.verdict("second_integral", lie(FY, lie(FY, d.G)).is_zero())
        X = build_full(spec)
        if d.chart is None:
            rep.verdict("reassembles", d.reassemble() == X)
    if spec.tag.startswith("A_"):
        rep.certificates["a_relation"] = dict(zip(("Omega", "j"), (lambda o, j: (o.to_expr(), j))(*check_theoremA_relation(spec))))


def _z0(args) -> CPoint:
    if not args.z0:
        raise InputError("--z0 is required")
    try:
        return CPoint.parse(args.z0)
    except FlowError as exc:
        raise InputError(str(exc)) from None


def _invariant(args):
    return None if not args.invariant else _fn(args.invariant, "--invariant")


def cmd_flow(args, rep: Report):
    X = _field_or_family(args, rep, full=True)
    z0 = _z0(args)
    if args.path:
        path = [_complex(s) for s in args.path.replace(";", " ").split()]
    else:
        path = [0j, _complex(args.t)]
    if len(path) < 2:
        raise InputError("--path needs at least two nodes")
    rep.inputs.update({"z0": z0.to_json(), "path": [[t.real, t.imag] for t in path], "tol": args.tol})
    inv = _invariant(args)
    tr = numeric_flow(X, z0, path, args.tol, inv)
    rep.verdict("completed", tr.status == "completed")
    rep.certificates["trace"] = tr.to_json()
    spec = _family(args)
    if spec is not None and args.exact:
        try:
            ex = exact_flow_fn(spec)
            e = z0
            for ta, tb in zip(path[:-1], path[1:]):
                e = ex(e, tb - ta)
            dev = max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(tr.final, e))
            rep.certificates["exact_final"] = e.to_json()
            rep.verdict("exact_deviation", dev)
        except FlowError as exc:
            rep.diagnostics.append(f"exact flow unavailable: {exc}")
    if args.jsonl:
        with open(args.jsonl, "w") as fh:
            fh.write(tr.to_jsonl())
        rep.inputs["jsonl"] = args.jsonl


def cmd_probe(args, rep: Report):
    X = _field_or_family(args, rep, full=True)
    z0 = _z0(args)
    if args.rays < 4:
        raise InputError("--rays must be >= 4")
    rep.inputs.update({"z0": z0.to_json(), "rmax": args.rmax, "rays": args.rays, "tol": args.tol})
    s = completeness_probe(X, z0, args.rmax, args.rays, args.tol, _invariant(args))
    rep.verdict("all_completed", s.all_completed)
    rep.verdict("max_drift", s.max_drift)
    rep.certificates["probe"] = s.to_json()
    if s.blowup:
        rep.diagnostics.append("blowup on at least one ray: the field is not complete")
    else:
        rep.diagnostics.append("all rays completed: evidence of completeness, not a proof")


HANDLERS = {
    "validate-family": cmd_validate_family, "first-integral": cmd_first_integral,
    "second-integral": cmd_second_integral, "darboux": cmd_darboux, "rational-integral": cmd_rational_integral,
    "uv-form": cmd_uv_form, "eta": cmd_eta, "time-form": cmd_time_form, "decompose": cmd_decompose,
    "flow": cmd_flow, "probe": cmd_probe,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_field(p):
    p.add_argument("--field", help='field as "x:<expr>, y:<expr>"')
    p.add_argument("--field-file", help="field as JSON {vars, P, Q}")


def _add_family(p):
    p.add_argument("--tag", help="family tag")
    p.add_argument("--family-file", help="family as JSON {tag, params}")
    for k in FAMILY_PARAMS:
        p.add_argument(f"--{k}", dest=f"fam_{k}", metavar=k.upper() if len(k) == 1 else None)


def make_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="campo", description="Complete vector fields with first or second integrals.")
    top.add_argument("--json", action="store_true", help="print the JSON report")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the JSON report")
        _add_family(p)
        if name not in ("validate-family", "decompose"):
            _add_field(p)
        if name in ("first-integral", "second-integral", "time-form"):
            p.add_argument("--fn", help="function f(x, y)")
        if name in ("darboux", "rational-integral"):
            p.add_argument("--lmax", type=int, default=1)
        if name in ("uv-form", "eta", "time-form"):
            p.add_argument("--R", help="rational first integral R(x, y)")
        if name in ("flow", "probe"):
            p.add_argument("--z0", help='initial point "x,y" (complex, e.g. "1+2i,0")')
            p.add_argument("--tol", type=float, default=1e-10)
            p.add_argument("--invariant", help="conserved quantity to monitor")
        if name == "flow":
            p.add_argument("--t", default="1", help="end time when --path is absent")
            p.add_argument("--path", help='time nodes separated by ";" or spaces')
            p.add_argument("--exact", action="store_true", help="compare with the closed-form flow")
            p.add_argument("--jsonl", help="write accepted steps as JSON lines")
        if name == "probe":
            p.add_argument("--rmax", type=float, default=5.0)
            p.add_argument("--rays", type=int, default=8)
    return top


def run(argv=None):
    """Execute one command; returns ``(exit_code, report, as_json)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    command = next((a for a in argv if a in COMMANDS), None)
    rep = Report(command or "validate-family")
    try:
        args = make_parser().parse_args(argv)
        if args.command is None:
            raise InputError(f"a command is required: {', '.join(COMMANDS)}")
        rep.command = args.command
        HANDLERS[args.command](args, rep)
    except (InputError, ParseError, FieldError, FamilyError, RiccatiError, FlowError, ValueError) as exc:
        rep.exit_code = 2
        cond = getattr(exc, "condition", None)
        rep.diagnostics.append(f"input error: {exc}" if cond is None else f"input error [{cond}]: {exc}")
        return 2, rep, as_json
    return rep.finish().exit_code, rep, as_json


def main(argv=None) -> int:
    code, rep, as_json = run(argv)
    if as_json:
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    else:
        print(rep.to_text(), file=sys.stdout if code != 2 else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
