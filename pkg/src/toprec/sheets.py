"""Sheet sums over the fiber of the x-projection, via quotient-ring towers.

For a degree-r curve the other preimages of x(z) are the roots of the monic
cosheet polynomial m(w; z) of degree r-1 over QQ(z).  Sums over ordered
tuples of distinct sheets are evaluated as iterated traces in the tower

    L1 = F[w1]/(m(w1)),   L2 = L1[w2]/(m(w2)/(w2 - w1)),   ...

where F = QQ(z, z1, ..., zn) carries the recursion variable and the
spectators.  Subset sums divide the ordered-tuple sums by k!.  Everything is
exact; inverting an identically-vanishing denominator raises
``NotInvertibleError`` and is fatal.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .curves import SpectralCurve
from .flats import ratfunc_over_spect_to_flat, ratfunc_to_flat
from .multirat import MultiRat
from .poly import RatFunc, UniPoly
from .quotient import QuotElem, QuotientRing, trace_mod
from .scalars import QQ_FIELD, FunctionField, ScalarField, function_field

# argument tags: ('z',) the recursion variable, ('w', j) the j-th adjoined
# sheet (1-based), ('s', i) the i-th spectator (0-based)
Tag = tuple


def tag_sort_key(tag: Tag):
    if tag[0] == "z":
        return (0, 0)
    if tag[0] == "w":
        return (1, tag[1])
    return (2, tag[1])


class SpectContext:
    """Per-curve, per-spectator-count caches: the flat field, curve data as
    flat elements, the sheet tower, and block-value memo tables."""

    def __init__(self, curve: SpectralCurve, n: int):
        self.curve = curve
        self.n = n
        names = ("z",) + tuple("z%d" % (i + 1) for i in range(n))
        self.ff = function_field(names)
        self.z = self.ff.gens[0]
        self.zs = self.ff.gens[1:]
        self.X = ratfunc_to_flat(curve.param.X, self.ff, 0)
        self.Y = ratfunc_to_flat(curve.param.Y, self.ff, 0)
        self.Xp = ratfunc_to_flat(curve.param.X.derivative(), self.ff, 0)
        self.Py = ratfunc_to_flat(curve.partial_y_at_param(), self.ff, 0)
        self.p_at = [ratfunc_to_flat(curve.p_at_param(k), self.ff, 0) for k in range(curve.r + 1)]
        from .poly import RatFuncField

        self._kz = RatFuncField(QQ_FIELD, "z")
        self._towers: list[QuotientRing] = []
        self._w_sheet_cache: dict = {}
        self._einv_cache: dict = {}
        self._block_cache: dict = {}
        self._den_inv_cache: dict = {}
        self._lift_pow_cache: dict = {}

    # -- tower ------------------------------------------------------------

    def ensure_tower(self, depth: int) -> None:
        while len(self._towers) < depth:
            j = len(self._towers)
            var = "w%d" % (j + 1)
            if j == 0:
                coeffs = [
                    ratfunc_over_spect_to_flat_q(c, self.ff) for c in self.curve.cosheet_coeffs
                ]
                m = UniPoly(_ffield_wrap(self.ff), coeffs, var)
                ring = QuotientRing(_ffield_wrap(self.ff), m, var)
            else:
                prev = self._towers[-1]
                lifted = UniPoly(prev, [prev.from_base(c) for c in prev.modulus.coeffs], var)
                lin = UniPoly(prev, [-prev.gen, prev.one], var)
                m = lifted.exact_div(lin)
                ring = QuotientRing(prev, m, var)
            ring._depth = j + 1  # type: ignore[attr-defined]
            self._towers.append(ring)

    def ring(self, level: int) -> QuotientRing:
        self.ensure_tower(level)
        return self._towers[level - 1]

    def level_of(self, e) -> int:
        if isinstance(e, QuotElem):
            return e.ring._depth  # type: ignore[attr-defined]
        return 0

    def lift(self, e, level: int):
        cur = self.level_of(e)
        while cur < level:
            e = self.ring(cur + 1).from_base(e)
            cur += 1
        return e

    def trace_down(self, e) -> object:
        """Iterated trace of a tower element back to the flat field."""
        while isinstance(e, QuotElem):
            e = trace_mod(e)
        return e

    def scalar_field(self, level: int) -> ScalarField:
        if level == 0:
            return _ffield_wrap(self.ff)
        return self.ring(level)

    # -- sheet data ---------------------------------------------------------

    def w_gen(self, j: int) -> QuotElem:
        return self.ring(j).gen

    def _eval_qq_ratfunc_at(self, rf: RatFunc, elem, level: int):
        fld = self.scalar_field(level)
        num = _horner_fraction_poly(rf.num, elem, fld)
        den = _horner_fraction_poly(rf.den, elem, fld)
        return num * fld.invert(den)

    def sheet_value(self, which: str, j: int):
        """Y, X' or 1/X' at the j-th adjoined sheet, as a level-j element."""
        key = (which, j)
        v = self._w_sheet_cache.get(key)
        if v is not None:
            return v
        w = self.w_gen(j)
        if which == "Y":
            v = self._eval_qq_ratfunc_at(self.curve.param.Y, w, j)
        elif which == "Xp":
            v = self._eval_qq_ratfunc_at(self.curve.param.X.derivative(), w, j)
        elif which == "Xp_inv":
            fld = self.scalar_field(j)
            v = fld.invert(self.sheet_value("Xp", j))
        else:
            raise KeyError(which)
        self._w_sheet_cache[key] = v
        return v

    def kernel_inverse(self, j: int):
        """1 / ((Y(z) - Y(w_j)) * X'(w_j)) as a level-j element."""
        v = self._einv_cache.get(j)
        if v is not None:
            return v
        fld = self.scalar_field(j)
        yz = self.lift(self.Y, j)
        val = (yz - self.sheet_value("Y", j)) * self.sheet_value("Xp", j)
        v = fld.invert(val)
        self._einv_cache[j] = v
        return v

    # -- block values ---------------------------------------------------------

    def arg_element(self, tag: Tag):
        if tag[0] == "z":
            return self.z
        if tag[0] == "w":
            return self.w_gen(tag[1])
        return self.zs[tag[1]]

    def block_value(self, table, g: int, tags: tuple[Tag, ...]):
        """The stored correlator W_{g, len(tags)} evaluated at the tagged
        arguments, stripped of its dz's; cached per (g, tags)."""
        tags = tuple(sorted(tags, key=tag_sort_key))
        key = (g, tags)
        v = self._block_cache.get(key)
        if v is not None:
            return v
        m = len(tags)
        level = max((t[1] for t in tags if t[0] == "w"), default=0)
        fld = self.scalar_field(level)
        if (g, m) == (0, 1):
            tag = tags[0]
            if tag[0] == "z":
                v = self.lift(self.Y * self.Xp, 0)
            elif tag[0] == "w":
                j = tag[1]
                v = self.sheet_value("Y", j) * self.sheet_value("Xp", j)
            else:
                raise ValueError("disk amplitude at a spectator argument")
        elif (g, m) == (0, 2):
            a = self.lift(self.arg_element(tags[0]), level)
            b = self.lift(self.arg_element(tags[1]), level)
            diff = a - b
            inv = fld.invert(diff)
            v = inv * inv
        else:
            mr = table.entry(g, m)
            v = self._eval_multirat(mr, tags, level, fld)
        self._block_cache[key] = v
        return v

    def _eval_multirat(self, mr: MultiRat, tags: tuple[Tag, ...], level: int, fld):
        if mr.is_zero():
            return fld.zero
        args = [self.lift(self.arg_element(t), level) for t in tags]
        num = _eval_multipoly(mr.num, args, fld)
        den = None
        for t in tags:
            inv = self._den_value_inv(mr.den, t)
            den = inv if den is None else _mul_mixed(self, den, inv)
        return _mul_mixed(self, num, den)

    def _den_value_inv(self, d: UniPoly, tag: Tag):
        key = (id(d), tag)
        v = self._den_inv_cache.get(key)
        if v is None:
            level = tag[1] if tag[0] == "w" else 0
            fld = self.scalar_field(level)
            val = _horner_fraction_poly(d, self.arg_element(tag), fld)
            v = fld.invert(val)
            self._den_inv_cache[key] = v
        return v


_FFIELD_WRAPS: dict[int, ScalarField] = {}


def _ffield_wrap(ff: FunctionField) -> ScalarField:
    return ff


def ratfunc_over_spect_to_flat_q(rf: RatFunc, ff: FunctionField):
    """RatFunc over QQ(z)-tower coefficients (RatFunc-over-QQ entries) into a
    flat element of ff; used for the cosheet coefficients."""
    # rf here is a RatFunc over QQ in variable z (elements of QQ(z))
    return ratfunc_to_flat(rf, ff, 0)


def _horner_fraction_poly(p: UniPoly, x, fld):
    """Evaluate a QQ-coefficient polynomial at a scalar of fld."""
    acc = fld.zero
    first = True
    for c in reversed(p.coeffs):
        if first:
            acc = fld.from_fraction(c)
            first = False
        else:
            acc = acc * x + fld.from_fraction(c)
    return acc


def _eval_multipoly(num: dict, args: list, fld):
    """Evaluate a multivariate Fraction-coefficient polynomial at scalars,
    grouping on the first variable recursively (sparse Horner)."""
    nvars = len(args)

    def rec(terms: dict, depth: int):
        if depth == nvars - 1:
            acc = None
            for e, c in terms.items():
                t = fld.from_fraction(c) * _pow(args[depth], e[0], fld)
                acc = t if acc is None else acc + t
            return acc if acc is not None else fld.zero
        groups: dict[int, dict] = {}
        for e, c in terms.items():
            groups.setdefault(e[0], {})[e[1:]] = c
        acc = None
        for deg, sub in groups.items():
            t = rec(sub, depth + 1) * _pow(args[depth], deg, fld)
            acc = t if acc is None else acc + t
        return acc if acc is not None else fld.zero

    return rec(num, 0)


def _pow(x, e: int, fld):
    if e == 0:
        return fld.one
    return x**e


def subset_sheet_sum(ctx: SpectContext, table, terms, k_w: int, include_z: bool, weight=None):
    """Sum over k_w-subsets of the deleted fiber of the blockwise products in
    ``terms``; the fiber slots are tagged (z, w1..w_kw) when include_z else
    (w1..w_kw).  ``weight`` (a level-k_w element, may be None) multiplies the
    term sum inside the iterated trace.  Returns a flat-field element."""
    ff = ctx.ff
    if not terms:
        return ff.from_int(0)
    fld = ctx.scalar_field(k_w)
    acc = fld.zero
    for term in terms:
        prod = None
        for (g_i, fiber_slots, spect_slots) in term:
            tags = []
            for s in fiber_slots:
                if include_z and s == 0:
                    tags.append(("z",))
                else:
                    tags.append(("w", s + (0 if include_z else 1)))
            for i in spect_slots:
                tags.append(("s", i))
            v = ctx.block_value(table, g_i, tuple(tags))
            prod = v if prod is None else _mul_mixed(ctx, prod, v)
        acc = _add_mixed(ctx, acc, prod)
    if weight is not None:
        acc = _mul_mixed(ctx, acc, weight)
    acc = ctx.lift(acc, k_w)
    out = ctx.trace_down(acc)
    if k_w > 1:
        out = out * ff.from_fraction(Fraction(1, math.factorial(k_w)))
    return out


def _mul_mixed(ctx: SpectContext, a, b):
    la, lb = ctx.level_of(a), ctx.level_of(b)
    lv = max(la, lb)
    return ctx.lift(a, lv) * ctx.lift(b, lv)


def _add_mixed(ctx: SpectContext, a, b):
    la, lb = ctx.level_of(a), ctx.level_of(b)
    lv = max(la, lb)
    return ctx.lift(a, lv) + ctx.lift(b, lv)
