"""Exact arithmetic core: Gaussian rationals, Laurent polynomials, rational
functions, exp-polynomials, parsing and printing."""
from .cnum import CNum, Rat, as_cnum
from .exppoly import ExpPoly, to_exppoly
from .gcd import coprime, gcd2
from .laurent import LaurentPoly2
from .linalg import nullspace, solve_linear
from .parse import ParseError, parse, parse_constant
from .rational import RationalFn2
from .subst import SubstitutionError, divides, poly_quotient, substitute
from .unipoly import UniPoly


def diff(e, var: str):
    """Exact partial derivative of an ExpPoly (or Laurent/rational) expression."""
    return e.diff(var)


def to_text(e) -> str:
    """Canonical text form, reparseable by :func:`parse`."""
    return e.to_expr()


__all__ = [
    "CNum", "Rat", "as_cnum", "ExpPoly", "to_exppoly", "gcd2", "coprime", "LaurentPoly2",
    "RationalFn2", "UniPoly", "parse", "parse_constant", "ParseError", "substitute",
    "SubstitutionError", "divides", "poly_quotient", "diff", "to_text", "nullspace", "solve_linear",
]
