"""Canonical storage for correlators: one multivariate numerator over a
product of identical univariate denominators, one factor per variable.

For an admissible curve every stable correlator has poles only along the
ramification factors in each variable separately, so its reduced denominator
factors as d(z1) * d(z2) * ... * d(zn) with a single monic d; this is what
makes exact golden-file comparison and fast coefficient access possible.
The numerator is a plain dict from exponent tuples to Fractions.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .poly import RatFunc, UniPoly
from .printing import grlex_key, multipoly_str, poly_str
from .scalars import QQ_FIELD, FunctionField, function_field, sym_to_fraction


class MultiRat:
    """value = (sum_e num[e] * prod z_i^e_i) / prod_i den(z_i)."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num: dict[tuple[int, ...], Fraction], den: UniPoly):
        self.n = n
        self.num = {e: c for e, c in num.items() if c != 0}
        self.den = den

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiRat)
            and self.n == other.n
            and self.num == other.num
            and (self.is_zero() or self.den == other.den)
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.num.items()))))

    def permuted(self, perm: tuple[int, ...]) -> "MultiRat":
        """Relabel variables: new slot i gets old slot perm[i]."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        num = {tuple(e[inv[i]] for i in range(self.n)): c for e, c in self.num.items()}
        return MultiRat(self.n, num, self.den)

    def is_symmetric(self) -> bool:
        for i in range(self.n - 1):
            perm = list(range(self.n))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            if self.permuted(tuple(perm)).num != self.num:
                return False
        return True

    # -- views ----------------------------------------------------------

    def variable_names(self) -> tuple[str, ...]:
        return tuple("z%d" % (i + 1) for i in range(self.n))

    def as_flat(self, ff: FunctionField, gen_indices: tuple[int, ...]):
        """The value as an element of the flat fraction field ``ff`` with
        slot i mapped to generator gen_indices[i]."""
        ring = ff.ring
        nvars = len(ff.names)
        num_dict = {}
        for e, c in self.num.items():
            key = [0] * nvars
            for i, ei in enumerate(e):
                key[gen_indices[i]] = ei
            num_dict[tuple(key)] = sympy.QQ(c.numerator, c.denominator)
        num = ring.from_dict(num_dict) if num_dict else ring.zero
        den = ring.one
        for i in range(self.n):
            den = den * _unipoly_to_polyelem(self.den, ring, gen_indices[i])
        return ff.field.new(num, den)

    def as_univariate(self, slot: int):
        """View in one variable over QQ(other variables); returns a RatFunc
        in that slot over the spectator FunctionField (or over QQ if n=1)."""
        if self.n == 1:
            num = {}
            for e, c in self.num.items():
                num[e[0]] = c
            top = max(num) if num else -1
            npoly = UniPoly(QQ_FIELD, [num.get(i, Fraction(0)) for i in range(top + 1)])
            return RatFunc(npoly, self.den)
        others = tuple(
            "z%d" % (j + 1) for j in range(self.n) if j != slot
        )
        sf = function_field(others)
        groups: dict[int, dict[tuple[int, ...], Fraction]] = {}
        for e, c in self.num.items():
            rest = tuple(ei for j, ei in enumerate(e) if j != slot)
            groups.setdefault(e[slot], {})[rest] = c
        top = max(groups) if groups else -1
        coeffs = []
        for i in range(top + 1):
            g = groups.get(i)
            if not g:
                coeffs.append(sf.zero)
            else:
                nd = {e: sympy.QQ(c.numerator, c.denominator) for e, c in g.items()}
                coeffs.append(sf.field.new(sf.ring.from_dict(nd), sf.ring.one))
        npoly = UniPoly(sf, coeffs, "t")
        dpoly = self.den.map_coeffs(sf.from_fraction, sf, "t")
        # full denominator: d(t) times the spectator factors (constants here)
        extra = sf.one
        for j in range(self.n):
            if j == slot:
                continue
            extra = extra * self.den.map_coeffs(sf.from_fraction, sf, "t").eval(
                sf.gen("z%d" % (j + 1))
            )
        return RatFunc(npoly.scale(sf.invert(extra)), dpoly)

    def __repr__(self) -> str:
        return "MultiRat(%s)" % self.format()

    def format(self) -> str:
        """Canonical human-readable form, deterministic."""
        if self.is_zero():
            return "0"
        names = self.variable_names()
        num_s = multipoly_str(self.num, names)
        if self.den.degree == 0:
            return num_s if " " not in num_s else "(%s)" % num_s
        dfac = []
        for nm in names:
            d = poly_str(_rename_poly(self.den, nm))
            dfac.append("(%s)" % d if " " in d or "+" in d or "-" in d[1:] else d)
        if " " in num_s:
            num_s = "(%s)" % num_s
        return "%s/(%s)" % (num_s, "*".join(dfac))


def _rename_poly(p: UniPoly, var: str) -> UniPoly:
    return UniPoly(p.field, p.coeffs, var)


def _unipoly_to_polyelem(p: UniPoly, ring, gen_index: int):
    nvars = ring.ngens
    d = {}
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        key = [0] * nvars
        key[gen_index] = i
        d[tuple(key)] = sympy.QQ(c.numerator, c.denominator)
    return ring.from_dict(d) if d else ring.zero


_EVAL_POINTS = (Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11),
                Fraction(13), Fraction(17), Fraction(19), Fraction(23), Fraction(29))


def multirat_from_flat(e, ff: FunctionField, n: int) -> MultiRat:
    """Canonicalize a flat fraction in the n generators of ``ff``.

    The reduced denominator must factor as c * prod_i d(z_i) with one monic
    univariate d (this is the shape every stable correlator has); the factor
    is recovered by specializing the other variables and then verified by an
    exact division.
    """
    if not e:
        return MultiRat(n, {}, UniPoly.const(QQ_FIELD, Fraction(1), "t"))
    num_p, den_p = e.numer, e.denom
    ring = ff.ring
    if den_p == ring.one or all(sum(mono) == 0 for mono in dict(den_p)):
        const = None
        for mono, c in dict(den_p).items():
            const = c
        num = {}
        for mono, c in dict(num_p).items():
            num[tuple(mono)] = sym_to_fraction(c) / sym_to_fraction(const)
        return MultiRat(n, num, UniPoly.const(QQ_FIELD, Fraction(1), "t"))
    den_uni = _extract_symmetric_denominator(den_p, ring, n)
    # num / (c * prod d(z_i)) with den_p = c * prod d(z_i)
    prod = ring.one
    for i in range(n):
        prod = prod * _unipoly_to_polyelem(den_uni, ring, i)
    quo, rem = den_p.div(prod)
    if rem or not _is_constant_polyelem(quo):
        raise ValueError("denominator does not split into per-variable factors")
    c = sym_to_fraction(next(iter(dict(quo).values())))
    num = {}
    for mono, coeff in dict(num_p).items():
        num[tuple(mono)] = sym_to_fraction(coeff) / c
    return MultiRat(n, num, den_uni)


def _extract_symmetric_denominator(den_p, ring, n: int) -> UniPoly:
    if n == 1:
        coeffs: dict[int, Fraction] = {}
        for mono, c in dict(den_p).items():
            coeffs[mono[0]] = sym_to_fraction(c)
        top = max(coeffs)
        p = UniPoly(QQ_FIELD, [coeffs.get(i, Fraction(0)) for i in range(top + 1)], "t")
        return p.monic()
    for offset in range(len(_EVAL_POINTS) - n + 1):
        vals = _EVAL_POINTS[offset : offset + n - 1]
        spec = den_p
        for j in range(1, n):
            spec = spec.subs(ring.gens[j], sympy.QQ(vals[j - 1].numerator, vals[j - 1].denominator))
        coeffs = {}
        for mono, c in dict(spec).items():
            coeffs[mono[0]] = sym_to_fraction(c)
        if not coeffs:
            continue
        top = max(coeffs)
        if top == 0:
            continue
        cand = UniPoly(QQ_FIELD, [coeffs.get(i, Fraction(0)) for i in range(top + 1)], "t").monic()
        prod = ring.one
        for i in range(n):
            prod = prod * _unipoly_to_polyelem(cand, ring, i)
        quo, rem = den_p.div(prod)
        if not rem and _is_constant_polyelem(quo):
            return cand
    raise ValueError("could not recover a per-variable denominator factorization")


def _is_constant_polyelem(p) -> bool:
    d = dict(p)
    return len(d) == 1 and all(e == 0 for e in next(iter(d)))
