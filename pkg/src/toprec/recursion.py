"""The topological recursion engine.

Correlators are built by the global residue formula: for each ramification
factor the recursion integrand is assembled from sheet sums over subsets of
the deleted fiber, divided by the kernel factors, and the third-kind-kernel
residues are read off as principal parts.  Residues are taken at *all*
ramification points of the x-projection, including poles of x of order two
or more and the point at infinity; for most curves the extra points
contribute nothing, but for some they are essential.

The module also computes the fiber-subset sums (the k-differential pieces of
the loop equations), the loop one-form whose residues restate the recursion,
and the identity suite used to cross-check every computed correlator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import SpectralCurve
from .flats import (
    flat_to_ratfunc_z,
    ratfunc_over_spect_to_flat,
    rename_flat,
    spectator_field,
    substitute_flat,
)
from .multirat import MultiRat, multirat_from_flat
from .poly import RatFunc, UniPoly
from .residues import (
    principal_part_at,
    proper_decomposition,
    residue_at_infinity,
    residue_sum_at_roots,
)
from .scalars import QQ_FIELD, FunctionField, function_field
from .sheets import SpectContext, subset_sheet_sum


class EngineError(RuntimeError):
    pass


class NotAdmissibleError(EngineError):
    pass


# ---------------------------------------------------------------------------
# partition structures
# ---------------------------------------------------------------------------


def _set_partitions(items: tuple[int, ...]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


Block = tuple[int, tuple[int, ...], tuple[int, ...]]  # (genus, fiber slots, spectator slots)
Term = tuple[Block, ...]

_TERMS_CACHE: dict = {}


def genus_partition_terms(nslots: int, g: int, n: int, exclude_disks: bool) -> tuple[Term, ...]:
    """All ways to split nslots fiber arguments into correlator factors: set
    partitions of the slots, distributions of the n spectators over the
    blocks, and genus assignments summing to g + #blocks - nslots.

    With ``exclude_disks`` the factors W_{0,1} are forbidden (the stable
    recursion structure); without it they are allowed (the fiber-sum
    structure).
    """
    key = (nslots, g, n, exclude_disks)
    got = _TERMS_CACHE.get(key)
    if got is not None:
        return got
    out: list[Term] = []
    for part in _set_partitions(tuple(range(nslots))):
        ell = len(part)
        gsum = g + ell - nslots
        if gsum < 0:
            continue
        for assign in itertools.product(range(ell), repeat=n):
            js: list[list[int]] = [[] for _ in range(ell)]
            for si, b in enumerate(assign):
                js[b].append(si)
            for gs in _compositions(gsum, ell):
                blocks: list[Block] = []
                ok = True
                for bi in range(ell):
                    m = len(part[bi]) + len(js[bi])
                    if exclude_disks and gs[bi] == 0 and m == 1:
                        ok = False
                        break
                    blocks.append((gs[bi], tuple(sorted(part[bi])), tuple(js[bi])))
                if ok:
                    out.append(tuple(sorted(blocks)))
    result = tuple(out)
    _TERMS_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# the correlator table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Correlator:
    g: int
    n: int
    value: MultiRat | None  # None only for (0,2)

    def format(self) -> str:
        if (self.g, self.n) == (0, 2):
            return "1/(z1 - z2)^2"
        assert self.value is not None
        return self.value.format()


_ALPHA_CANDIDATES = (Fraction(5), Fraction(7), Fraction(11), Fraction(13),
                     Fraction(17), Fraction(19), Fraction(23))


class CorrelatorTable:
    """Memoized correlators of one spectral curve.

    Entries are write-once: each (g, n) is computed at most once, in
    increasing order of 2g-2+n when filled via :meth:`fill`.
    """

    def __init__(self, curve: SpectralCurve, base_point: Fraction | None = None):
        self.curve = curve
        self.entries: dict[tuple[int, int], MultiRat] = {}
        self.diag_total_residue_zero: dict[tuple[int, int], bool] = {}
        self._contexts: dict[int, SpectContext] = {}
        self.alpha = base_point if base_point is not None else default_base_point(curve)
        self.entries[(0, 1)] = _w01_multirat(curve)

    def context(self, n: int) -> SpectContext:
        ctx = self._contexts.get(n)
        if ctx is None:
            ctx = SpectContext(self.curve, n)
            self._contexts[n] = ctx
        return ctx

    def entry(self, g: int, n: int) -> MultiRat:
        if (g, n) == (0, 2):
            raise EngineError("W_{0,2} is not stored as a canonical fraction")
        got = self.entries.get((g, n))
        if got is None:
            got = self._compute(g, n)
            self.entries[(g, n)] = got
        return got

    def correlator(self, g: int, n: int) -> Correlator:
        if g < 0 or n < 1:
            raise ValueError("invalid correlator index (%d, %d)" % (g, n))
        if (g, n) == (0, 2):
            return Correlator(0, 2, None)
        if 2 * g - 2 + n < 0 and (g, n) != (0, 1):
            raise ValueError("unstable index (%d, %d)" % (g, n))
        return Correlator(g, n, self.entry(g, n))

    def fill(self, chi_max: int) -> None:
        """Compute all stable entries with 2g-2+n <= chi_max, by increasing
        Euler characteristic, then increasing genus."""
        for chi in range(1, chi_max + 1):
            for g in range((chi + 2) // 2 + 1):
                n = chi + 2 - 2 * g
                if n >= 1 and 2 * g - 2 + n >= 1:
                    self.entry(g, n)

    # -- the recursion ------------------------------------------------------

    def _compute(self, g: int, n_target: int) -> MultiRat:
        if 2 * g - 2 + n_target < 1:
            raise EngineError("recursion reached an unstable index (%d, %d)" % (g, n_target))
        phi, ctx = self._integrand(g, n_target, self)
        mr, total_zero = extract_correlator(self, ctx, phi, n_target, self.alpha)
        self.diag_total_residue_zero[(g, n_target)] = total_zero
        if not mr.is_symmetric():
            raise EngineError("computed W_{%d,%d} is not symmetric" % (g, n_target))
        return mr

    def _integrand(self, g: int, n_target: int, table) -> tuple[object, SpectContext]:
        n = n_target - 1
        ctx = self.context(n)
        ff = ctx.ff
        r = self.curve.r
        phi = ff.from_int(0)
        for k in range(1, r):
            terms = genus_partition_terms(k + 1, g, n, exclude_disks=True)
            if not terms:
                continue
            ctx.ensure_tower(k)
            weight = None
            for j in range(1, k + 1):
                e = ctx.lift(ctx.kernel_inverse(j), k)
                weight = e if weight is None else weight * e
            s = subset_sheet_sum(ctx, table, terms, k, include_z=True, weight=weight)
            if k % 2 == 1:
                phi = phi + s
            else:
                phi = phi - s
        return phi, ctx

    def recursion_integrand(self, g: int, n_target: int):
        """The summand of the recursion before taking residues, as a flat
        fraction in (z, z1, ..., z_{n_target-1}); exposed for the identity
        suite's total-residue check."""
        phi, _ctx = self._integrand(g, n_target, self)
        return phi


def default_base_point(curve: SpectralCurve) -> Fraction:
    """A rational base point for the third-kind kernel that avoids every
    ramification factor, puncture and zero."""
    bad: list[UniPoly] = [p for p, _k in curve.ramification.finite_factors]
    bad.append(curve.ramification.puncture_poly)
    for cand in _ALPHA_CANDIDATES:
        if all(p.is_zero() or p.eval(cand) != 0 for p in bad):
            return cand
    raise EngineError("no admissible base point among the candidates")


def _w01_multirat(curve: SpectralCurve) -> MultiRat:
    w01 = curve.param.Y * curve.param.X.derivative()
    num = {(i,): c for i, c in enumerate(w01.num.coeffs)}
    return MultiRat(1, num, w01.den)


def w02_flat(ctx: SpectContext, i: int, j: int):
    """W_{0,2} with both arguments at spectator slots, as a flat element."""
    a = ctx.zs[i]
    b = ctx.zs[j]
    d = a - b
    return ctx.ff.from_int(1) / (d * d)


def extract_correlator(table: CorrelatorTable, ctx: SpectContext, phi, n_target: int,
                       alpha: Fraction) -> tuple[MultiRat, bool]:
    """Apply the third-kind kernel and sum the residues over the ramification
    locus; returns the canonical correlator and whether the total residue of
    the integrand vanished (it must, by base-point independence)."""
    curve = table.curve
    ff = ctx.ff
    sf = spectator_field(ff)
    fz = flat_to_ratfunc_z(phi, ff)
    var = fz.num.var
    out = RatFunc.const(sf, sf.zero, var)
    total = sf.zero
    for rho_q, _kind in curve.ramification.finite_factors:
        rho = rho_q.map_coeffs(sf.from_fraction, sf, var)
        a, e = principal_part_at(fz, rho)
        if e and not a.is_zero():
            out = out + RatFunc(a, rho**e)
        total = total + residue_sum_at_roots(fz, rho)
    if curve.ramification.infinity is not None:
        q, _prop = proper_decomposition(fz)
        if not q.is_zero():
            out = out + RatFunc.from_poly(q)
        total = total + residue_at_infinity(fz)
    total_zero = sf.is_zero(total)
    if not total_zero:
        pole = UniPoly(sf, [-sf.from_fraction(alpha), sf.one], var)
        out = out - RatFunc(UniPoly.const(sf, total, var), pole)
    g_field = function_field(tuple("z%d" % (i + 1) for i in range(n_target)))
    flat = ratfunc_over_spect_to_flat(out, sf, g_field)
    return multirat_from_flat(flat, g_field, n_target), total_zero


# ---------------------------------------------------------------------------
# fiber sums (the k-differential loop-equation pieces, all divided by dx^k)
# ---------------------------------------------------------------------------


def deleted_fiber_sum(table: CorrelatorTable, g: int, n: int, k: int):
    """Sum over k-subsets of the deleted fiber (the preimages of x(z) other
    than z itself) of products of correlators, divided by dx(z)^k.

    Vanishes for k >= r; equals delta_{g,0} delta_{n,0} at k = 0.
    """
    ctx = table.context(n)
    ff = ctx.ff
    r = table.curve.r
    if k == 0:
        return ff.from_int(1 if (g, n) == (0, 0) else 0)
    if k > r - 1:
        return ff.from_int(0)
    terms = genus_partition_terms(k, g, n, exclude_disks=False)
    if not terms:
        return ff.from_int(0)
    ctx.ensure_tower(k)
    weight = None
    for j in range(1, k + 1):
        e = ctx.lift(ctx.sheet_value("Xp_inv", j), k)
        weight = e if weight is None else weight * e
    return subset_sheet_sum(ctx, table, terms, k, include_z=False, weight=weight)


def fiber_sum(table: CorrelatorTable, g: int, n: int, k: int):
    """Sum over k-subsets of the full fiber of x(z), divided by dx(z)^k; the
    pullback of a base k-differential.  Vanishes for k > r."""
    ctx = table.context(n)
    ff = ctx.ff
    r = table.curve.r
    if k == 0:
        return ff.from_int(1 if (g, n) == (0, 0) else 0)
    if k > r:
        return ff.from_int(0)
    total = deleted_fiber_sum(table, g, n, k)
    terms = genus_partition_terms(k, g, n, exclude_disks=False)
    if terms:
        k_w = k - 1
        weight = None
        if k_w:
            ctx.ensure_tower(k_w)
            for j in range(1, k_w + 1):
                e = ctx.lift(ctx.sheet_value("Xp_inv", j), k_w)
                weight = e if weight is None else weight * e
        part = subset_sheet_sum(ctx, table, terms, k_w, include_z=True, weight=weight)
        total = total + part / ctx.Xp
    return total


def loop_oneform(table: CorrelatorTable, g: int, n: int):
    """The one-form (divided by dz) whose residues at the ramification locus
    restate the recursion: dx/ (dP/dy) * p_0 * sum_k (-1)^k y^{r-k} Q_k."""
    ctx = table.context(n)
    ff = ctx.ff
    r = table.curve.r
    acc = ff.from_int(0)
    ypow = ff.from_int(1)
    pieces = []
    for k in range(r, 0, -1):
        pieces.append((k, fiber_sum(table, g, n, k)))
    for k, q in pieces:
        term = q * ypow if k % 2 == 0 else -(q * ypow)
        acc = acc + term
        ypow = ypow * ctx.Y
    return ctx.Xp / ctx.Py * ctx.p_at[0] * acc


# ---------------------------------------------------------------------------
# loop-equation reconstruction (independent of the residue path)
# ---------------------------------------------------------------------------


def _renamed_deleted_fiber_sum(table: CorrelatorTable, g: int, n_spect: int, k: int,
                               dst: SpectContext, z_to: int, spect_to: tuple[int, ...]):
    """deleted_fiber_sum computed in its own context, then moved into dst's
    field with the active variable sent to generator z_to and spectator i to
    generator spect_to[i] (indices into dst.ff.gens)."""
    val = deleted_fiber_sum(table, g, n_spect, k)
    src = table.context(n_spect).ff
    genmap = {0: z_to}
    for i, t in enumerate(spect_to):
        genmap[i + 1] = t
    return rename_flat(val, src, dst.ff, genmap)


def pole_formula_rhs(table: CorrelatorTable, g: int, n: int, m: int):
    """The explicit expression for p_0 Q_m / (x^floor(alpha_{r-m+1}) dx^m)
    obtained from the pole analysis, for stable (g, n+1); uses only strictly
    lower correlators."""
    curve = table.curve
    ctx = table.context(n)
    ff = ctx.ff
    a = curve.polygon.alpha_floor[curve.r - m + 1]
    if n == 0:
        return ff.from_int(0)
    acc = ff.from_int(0)
    xz = ctx.X
    for i in range(n):
        gen_i = i + 1
        spect_to = tuple(j + 1 for j in range(n) if j != i)
        u_low = _renamed_deleted_fiber_sum(table, g, n - 1, m - 1, ctx, gen_i, spect_to)
        xi = substitute_flat(xz, ff, 0, ff.gens[gen_i], limit=False)
        p0_i = substitute_flat(ctx.p_at[0], ff, 0, ff.gens[gen_i], limit=False)
        inner = u_low * p0_i / (xi**a if a else ff.from_int(1)) / (xz - xi)
        acc = acc + inner.diff(ff.gens[gen_i])
    return acc


def pole_formula_lhs(table: CorrelatorTable, g: int, n: int, m: int):
    curve = table.curve
    ctx = table.context(n)
    ff = ctx.ff
    a = curve.polygon.alpha_floor[curve.r - m + 1]
    q = fiber_sum(table, g, n, m)
    lhs = ctx.p_at[0] * q
    if a:
        lhs = lhs / ctx.X**a
    return lhs


def _cross_pairs(n: int, g: int):
    """All ((g1, J1), (g2, J2)) with J1 disjoint-union J2 = spectators and
    g1 + g2 = g; same-level pairs are kept (callers filter)."""
    idx = tuple(range(n))
    for size1 in range(n + 1):
        for j1 in itertools.combinations(idx, size1):
            j2 = tuple(i for i in idx if i not in j1)
            for g1 in range(g + 1):
                yield (g1, j1), (g - g1, j2)


def reconstruct_from_loop_equations(table: CorrelatorTable, g: int, n_target: int):
    """W_{g, n_target} rebuilt by solving the chain of loop equations with
    the vanishing of the r-th deleted-fiber sum as the closing condition --
    no residues are taken anywhere.  Returns a flat fraction in the field of
    the (n_target-1)-spectator context (active variable first)."""
    curve = table.curve
    r = curve.r
    n = n_target - 1
    ctx = table.context(n)
    ff = ctx.ff
    if 2 * g - 2 + n_target < 1:
        raise ValueError("reconstruction needs a stable index")
    y01del = deleted_fiber_sum(table, 0, 0, 1)
    p0 = ctx.p_at[0]
    p1 = ctx.p_at[1]
    # u_m = const_m + coef_m * u_1
    const_m = ff.from_int(0)
    coef_m = ff.from_int(1)
    for m in range(2, r + 1):
        a_m = _chain_inhomogeneous(table, g, n, m)
        del01 = deleted_fiber_sum(table, 0, 0, m - 1)
        new_const = a_m - ctx.Y * const_m
        new_coef = del01 - ctx.Y * coef_m
        const_m, coef_m = new_const, new_coef
    # closing condition: u_r = 0
    u1 = -(const_m / coef_m)
    w = -(u1 * ctx.Xp)
    return w


def _chain_inhomogeneous(table: CorrelatorTable, g: int, n: int, m: int):
    """The part of the m-th loop equation made of strictly lower data:
    q_m - hat-term + lower cross terms - the coinciding-point pullbacks."""
    curve = table.curve
    ctx = table.context(n)
    ff = ctx.ff
    acc = pole_formula_rhs(table, g, n, m)
    a = curve.polygon.alpha_floor[curve.r - m + 1]
    if a:
        acc = acc * ctx.X**a
    acc = acc / ctx.p_at[0]
    # hat: the (g-1, n+2)-type term with its extra slot brought back to z
    if g >= 1:
        big = table.context(n + 1)
        val = deleted_fiber_sum(table, g - 1, n + 1, m - 1)
        val = substitute_flat(val, big.ff, n + 1, big.ff.gens[0])
        genmap = {i: i for i in range(n + 1)}
        hat = rename_flat(val, big.ff, ctx.ff, genmap)
        acc = acc - hat / ctx.Xp
    # cross terms over genus/spectator splittings, skipping the two
    # same-level factors (handled by the linear chain)
    for (g1, j1), (g2, j2) in _cross_pairs(n, g):
        if (g1, j1) == (g, tuple(range(n))) and g2 == 0 and not j2:
            continue  # u_{m-1} * disk sum, same level
        if (g2, j2) == (g, tuple(range(n))) and g1 == 0 and not j1:
            continue  # disk sum * u_1, same level
        f1 = _renamed_deleted_fiber_sum(table, g1, len(j1), m - 1, ctx, 0,
                                        tuple(i + 1 for i in j1))
        if not f1:
            continue
        f2 = _renamed_deleted_fiber_sum(table, g2, len(j2), 1, ctx, 0,
                                        tuple(i + 1 for i in j2))
        if not f2:
            continue
        acc = acc + f1 * f2
    # coinciding-point pullbacks
    for i in range(n):
        gen_i = i + 1
        spect_to = tuple(j + 1 for j in range(n) if j != i)
        u_low = _renamed_deleted_fiber_sum(table, g, n - 1, m - 1, ctx, 0, spect_to)
        if not u_low:
            continue
        xi = substitute_flat(ctx.X, ff, 0, ff.gens[gen_i], limit=False)
        xpi = substitute_flat(ctx.Xp, ff, 0, ff.gens[gen_i], limit=False)
        diff = ctx.X - xi
        acc = acc - xpi / (diff * diff) * u_low
    return acc
