"""Helpers for flat multivariate fractions (sympy FracElement).

The recursion engine keeps intermediate values in flat fraction fields
QQ(z, z1, ..., zn).  This module provides the conversions between those
fractions and the univariate ``UniPoly``/``RatFunc`` view in one designated
variable (needed by the residue machinery), generator renaming, exact
substitution with pole cancellation, and derivatives.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .poly import RatFunc, UniPoly
from .scalars import QQ_FIELD, FunctionField, ScalarField, sym_to_fraction

INF = "inf"


class PoleError(ArithmeticError):
    """Exact substitution hit a genuine pole."""


def ratfunc_to_flat(rf: RatFunc, ff: FunctionField, gen_index: int):
    """A rational function over QQ in one variable, as an element of ff."""
    g = ff.gens[gen_index]
    num = _qq_unipoly_flat(rf.num, ff, gen_index)
    den = _qq_unipoly_flat(rf.den, ff, gen_index)
    return ff.field.new(num, den)


def _qq_unipoly_flat(p: UniPoly, ff: FunctionField, gen_index: int):
    ring = ff.ring
    nvars = ring.ngens
    d = {}
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        key = [0] * nvars
        key[gen_index] = i
        d[tuple(key)] = sympy.QQ(c.numerator, c.denominator)
    return ring.from_dict(d) if d else ring.zero


def spectator_field(ff: FunctionField) -> ScalarField:
    """The field of the generators of ff except the first (QQ if only one)."""
    from .scalars import function_field

    if len(ff.names) == 1:
        return QQ_FIELD
    return function_field(ff.names[1:])


def flat_to_ratfunc_z(e, ff: FunctionField) -> RatFunc:
    """View a flat fraction as a RatFunc in the first generator over the
    spectator field."""
    sf = spectator_field(ff)
    num = _polyelem_to_unipoly_z(e.numer, ff, sf)
    den = _polyelem_to_unipoly_z(e.denom, ff, sf)
    return RatFunc(num, den)


def _polyelem_to_unipoly_z(p, ff: FunctionField, sf: ScalarField) -> UniPoly:
    groups: dict[int, dict] = {}
    for mono, c in dict(p).items():
        groups.setdefault(mono[0], {})[tuple(mono[1:])] = c
    if not groups:
        return UniPoly.zero(sf, "z")
    top = max(groups)
    coeffs = []
    for i in range(top + 1):
        sub = groups.get(i)
        if not sub:
            coeffs.append(sf.zero)
        elif isinstance(sf, FunctionField):
            coeffs.append(sf.field.new(sf.ring.from_dict(sub), sf.ring.one))
        else:
            if len(sub) != 1:
                raise ValueError("nonconstant spectator part in a 1-variable field")
            coeffs.append(sym_to_fraction(next(iter(sub.values()))))
    return UniPoly(sf, coeffs, "z")


def spect_to_flat(c, sf: ScalarField, ff: FunctionField):
    """Embed a spectator-field element into ff (generators shifted by one)."""
    if not isinstance(sf, FunctionField):
        q = c if isinstance(c, Fraction) else sym_to_fraction(c)
        return ff.from_fraction(q)
    num = _shift_polyelem(c.numer, ff)
    den = _shift_polyelem(c.denom, ff)
    return ff.field.new(num, den)


def _shift_polyelem(p, ff: FunctionField):
    ring = ff.ring
    d = {}
    for mono, c in dict(p).items():
        d[(0,) + tuple(mono)] = c
    return ring.from_dict(d) if d else ring.zero


def ratfunc_over_spect_to_flat(rf: RatFunc, sf: ScalarField, ff: FunctionField):
    """A RatFunc in the lead variable with spectator-field coefficients, as a
    flat element of ff."""
    z = ff.gens[0]
    acc_num = ff.from_int(0)
    for i, c in enumerate(rf.num.coeffs):
        acc_num = acc_num + spect_to_flat(c, sf, ff) * z**i
    acc_den = ff.from_int(0)
    for i, c in enumerate(rf.den.coeffs):
        acc_den = acc_den + spect_to_flat(c, sf, ff) * z**i
    return acc_num / acc_den


def rename_flat(e, src: FunctionField, dst: FunctionField, genmap: dict[int, int]):
    """Move a fraction to another field, sending src generator i to dst
    generator genmap[i]."""
    num = _remap_polyelem(e.numer, src, dst, genmap)
    den = _remap_polyelem(e.denom, src, dst, genmap)
    return dst.field.new(num, den)


def _remap_polyelem(p, src: FunctionField, dst: FunctionField, genmap: dict[int, int]):
    ring = dst.ring
    nvars = ring.ngens
    d = {}
    for mono, c in dict(p).items():
        key = [0] * nvars
        for i, e in enumerate(mono):
            if e:
                key[genmap[i]] = e
        d[tuple(key)] = d.get(tuple(key), sympy.QQ(0)) + c
    d = {k: v for k, v in d.items() if v}
    return ring.from_dict(d) if d else ring.zero


def flat_derivative(e, ff: FunctionField, gen_index: int):
    return e.diff(ff.gens[gen_index])


def _poly_subs_gen(p, ff: FunctionField, gen_index: int, value):
    """Substitute an ff element for one generator of a PolyElement; the
    result is an ff fraction."""
    groups: dict[int, dict] = {}
    for mono, c in dict(p).items():
        key = mono[:gen_index] + (0,) + mono[gen_index + 1 :]
        groups.setdefault(mono[gen_index], {})[key] = c
    acc = ff.from_int(0)
    for deg, sub in groups.items():
        base = ff.field.new(ff.ring.from_dict(sub), ff.ring.one)
        acc = acc + base * value**deg
    return acc


def substitute_flat(e, ff: FunctionField, gen_index: int, value, *, limit: bool = True):
    """Exact substitution of generator -> value (an ff element or Fraction),
    cancelling removable (gen - value) factors when ``limit`` is set.

    Raises :class:`PoleError` at a genuine pole.
    """
    if isinstance(value, Fraction):
        value = ff.from_fraction(value)
    num, den = e.numer, e.denom
    gen_poly = ff.ring.gens[gen_index]
    if value.denom == ff.ring.one and len(dict(value.numer)) <= 1:
        # linear factor for cancellation: gen - value (value a monomial)
        lin = gen_poly - value.numer
    else:
        lin = None
    den_val = _poly_subs_gen(den, ff, gen_index, value)
    num_val = None
    while not den_val:
        if not limit or lin is None:
            raise PoleError("substitution hit a pole and no limit was possible")
        qn, rn = num.div(lin)
        qd, rd = den.div(lin)
        if rd:
            raise PoleError("denominator not divisible by the vanishing factor")
        if rn:
            raise PoleError("genuine pole: numerator does not vanish with denominator")
        num, den = qn, qd
        den_val = _poly_subs_gen(den, ff, gen_index, value)
    num_val = _poly_subs_gen(num, ff, gen_index, value)
    return num_val / den_val


def limit_at_point(e, ff: FunctionField, gen_index: int, point: Fraction | str):
    """Exact limit of e as generator -> rational point or 'inf'.

    For a finite point this cancels (gen - point) factors; for infinity it
    compares degrees in the generator.  Raises :class:`PoleError` when the
    limit is infinite.
    """
    if point == INF:
        g = ff.gens[gen_index]
        dn = e.numer.degree(ff.ring.gens[gen_index])
        dd = e.denom.degree(ff.ring.gens[gen_index])
        if dn > dd:
            raise PoleError("pole at infinity in the substituted variable")
        num_top = _leading_coeff_in(e.numer, ff, gen_index, dd)
        den_top = _leading_coeff_in(e.denom, ff, gen_index, dd)
        return num_top / den_top
    return substitute_flat(e, ff, gen_index, ff.from_fraction(point))


def _leading_coeff_in(p, ff: FunctionField, gen_index: int, deg: int):
    d = {}
    for mono, c in dict(p).items():
        if mono[gen_index] == deg:
            key = mono[:gen_index] + (0,) + mono[gen_index + 1 :]
            d[key] = c
    num = ff.ring.from_dict(d) if d else ff.ring.zero
    return ff.field.new(num, ff.ring.one)
