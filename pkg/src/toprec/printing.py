"""Deterministic printers for polynomials, fractions and correlators.

All user-facing output goes through these helpers so that identical inputs
produce byte-identical text: terms are ordered by descending degree, rational
coefficients print as ``p/q``, and multivariate numerators use descending
graded-lexicographic order with z1 < z2 < ...
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any


def scalar_str(c: Any) -> str:
    """Render a coefficient; Fractions and sympy rationals both print p/q."""
    return str(c)


def _scalar_is_one(c: Any) -> bool:
    try:
        return c == 1
    except TypeError:
        return False


def _scalar_is_minus_one(c: Any) -> bool:
    try:
        return c == -1
    except TypeError:
        return False


def _term_str(coeff: Any, var: str, power: int) -> str:
    if power == 0:
        return scalar_str(coeff)
    if power == 1:
        head = var
    else:
        head = "%s^%d" % (var, power)
    if _scalar_is_one(coeff):
        return head
    if _scalar_is_minus_one(coeff):
        return "-" + head
    cs = scalar_str(coeff)
    if any(op in cs[1:] for op in "+-") or "/" in cs or " " in cs:
        cs = "(%s)" % cs
    return "%s*%s" % (cs, head)


def poly_str(p) -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if p.field.is_zero(c):
            continue
        t = _term_str(c, p.var, i)
        if not parts:
            parts.append(t)
        elif t.startswith("-"):
            parts.append("- " + t[1:])
        else:
            parts.append("+ " + t)
    return " ".join(parts)


def ratfunc_str(f) -> str:
    if f.is_zero():
        return "0"
    ns = poly_str(f.num)
    if f.is_polynomial():
        return ns
    ds = poly_str(f.den)
    if " " in ns:
        ns = "(%s)" % ns
    if " " in ds or f.den.degree > 0 and len(f.den.coeffs) > 1:
        ds = "(%s)" % ds
    return "%s/%s" % (ns, ds)


def fraction_str(q: Fraction) -> str:
    return str(q)


def grlex_key(exps: tuple[int, ...]):
    """Sort key for descending graded lex with the first variable most
    significant: bigger total degree first, ties broken lexicographically."""
    return (-sum(exps), tuple(-e for e in exps))


def monomial_str(exps: tuple[int, ...], names: tuple[str, ...]) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 0:
            continue
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def multipoly_str(terms: dict[tuple[int, ...], Fraction], names: tuple[str, ...]) -> str:
    """Multivariate polynomial with Fraction coefficients, graded-lex order."""
    if not terms:
        return "0"
    out: list[str] = []
    for exps in sorted(terms, key=grlex_key):
        c = terms[exps]
        if c == 0:
            continue
        mono = monomial_str(exps, names)
        if mono == "1":
            t = fraction_str(c)
        elif c == 1:
            t = mono
        elif c == -1:
            t = "-" + mono
        else:
            cs = fraction_str(c)
            if "/" in cs:
                cs = "(%s)" % cs
            t = "%s*%s" % (cs, mono)
        if not out:
            out.append(t)
        elif t.startswith("-"):
            out.append("- " + t[1:])
        else:
            out.append("+ " + t)
    return " ".join(out) if out else "0"
