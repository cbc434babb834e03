"""Spectral curves: plane model, rational parametrization, Newton polygon,
admissibility and the ramification locus of the x-projection.

A curve is given by an irreducible P(x, y) = p_0(x) y^r + ... + p_r(x) and a
rational parametrization (X(z), Y(z)) of its normalization, which the caller
supplies and we validate.  Points of the curve are z-coordinates in
QQ union {infinity}; the point at infinity is always handled through the
chart u = 1/z.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import RatFunc, UniPoly, poly_gcd, squarefree_factorization, squarefree_part
from .scalars import QQ_FIELD
from .printing import multipoly_str


class CurveError(ValueError):
    pass


class NotOnCurveError(CurveError):
    pass


class WrongDegreeError(CurveError):
    pass


class BadBranchPointsError(CurveError):
    pass


class NotAdmissibleError(CurveError):
    pass


@dataclass(frozen=True)
class PlanePolynomial:
    """P(x,y) as a table of exponents; r is the y-degree."""

    coefficients: dict[tuple[int, int], Fraction]
    r: int

    @staticmethod
    def from_dict(coeffs: dict[tuple[int, int], Fraction]) -> "PlanePolynomial":
        coeffs = {k: Fraction(v) for k, v in coeffs.items() if v != 0}
        if not coeffs:
            raise CurveError("the zero polynomial does not define a curve")
        r = max(j for (_i, j) in coeffs)
        p = PlanePolynomial(coefficients=coeffs, r=r)
        if p.p(0).is_zero():
            raise CurveError("coefficient of y^r vanished; inconsistent y-degree")
        return p

    def p(self, k: int) -> UniPoly:
        """p_k(x): the coefficient of y^(r-k), as a polynomial in x."""
        j = self.r - k
        coeffs: dict[int, Fraction] = {}
        for (i, jj), c in self.coefficients.items():
            if jj == j:
                coeffs[i] = c
        if not coeffs:
            return UniPoly.zero(QQ_FIELD, "x")
        top = max(coeffs)
        return UniPoly(QQ_FIELD, [coeffs.get(i, Fraction(0)) for i in range(top + 1)], "x")

    def partial_y(self) -> "dict[tuple[int, int], Fraction]":
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.coefficients.items():
            if j >= 1:
                out[(i, j - 1)] = out.get((i, j - 1), Fraction(0)) + c * j
        return out

    def eval_rational(self, x: RatFunc, y: RatFunc) -> RatFunc:
        acc = RatFunc.const(QQ_FIELD, Fraction(0), x.var)
        for k in range(self.r + 1):
            pk = self.p(k)
            if pk.is_zero():
                continue
            term = RatFunc.from_poly(pk).compose(x) * y ** (self.r - k)
            acc = acc + term
        return acc

    def eval_partial_y(self, x: RatFunc, y: RatFunc) -> RatFunc:
        acc = RatFunc.const(QQ_FIELD, Fraction(0), x.var)
        for k in range(self.r):
            pk = self.p(k)
            if pk.is_zero():
                continue
            term = RatFunc.from_poly(pk).compose(x) * y ** (self.r - k - 1)
            acc = acc + term.scale(Fraction(self.r - k))
        return acc

    def value_at_origin(self) -> Fraction:
        return self.coefficients.get((0, 0), Fraction(0))

    def gradient_at_origin(self) -> tuple[Fraction, Fraction]:
        return (
            self.coefficients.get((1, 0), Fraction(0)),
            self.coefficients.get((0, 1), Fraction(0)),
        )

    def __str__(self) -> str:
        return multipoly_str(self.coefficients, ("x", "y"))


@dataclass(frozen=True)
class Parametrization:
    """x = X(z), y = Y(z), rational over QQ."""

    X: RatFunc
    Y: RatFunc


def _convex_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone-chain hull, counterclockwise, no collinear interior vertices."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    alpha_floor: tuple[int, ...]
    beta_ceil: tuple[int, ...]
    interior_count: int


def newton_polygon(plane: PlanePolynomial) -> NewtonPolygon:
    support = list(plane.coefficients.keys())
    hull = _convex_hull(support)
    r = plane.r
    alpha: list[Fraction] = []
    beta: list[Fraction] = []
    edges = list(zip(hull, hull[1:] + hull[:1])) if len(hull) >= 2 else []
    for m in range(r + 1):
        xs: list[Fraction] = []
        for (x0, y0) in hull:
            if y0 == m:
                xs.append(Fraction(x0))
        for (a, b) in edges:
            y0, y1 = a[1], b[1]
            if y0 == y1:
                continue
            lo, hi = min(y0, y1), max(y0, y1)
            if lo <= m <= hi:
                t = Fraction(m - a[1], b[1] - a[1])
                xs.append(Fraction(a[0]) + t * (b[0] - a[0]))
        if not xs:
            raise CurveError("Newton polygon has an empty row at height %d" % m)
        alpha.append(min(xs))
        beta.append(max(xs))
    interior = sum(
        math.ceil(beta[i]) - math.floor(alpha[i]) - 1 for i in range(1, r)
    ) if r >= 2 else 0
    return NewtonPolygon(
        vertices=tuple(hull),
        alpha=tuple(alpha),
        beta=tuple(beta),
        alpha_floor=tuple(math.floor(a) for a in alpha),
        beta_ceil=tuple(math.ceil(b) for b in beta),
        interior_count=interior,
    )


class RamKind(enum.Enum):
    ZERO_OF_DX = "zero of dx"
    POLE_OF_X = "pole of x of order >= 2"


@dataclass(frozen=True)
class RamificationLocus:
    finite_factors: tuple[tuple[UniPoly, RamKind], ...]
    infinity: RamKind | None
    puncture_poly: UniPoly
    puncture_at_infinity: bool


def _pole_order_at_infinity(f: RatFunc) -> int:
    """Order of the pole of f at z=infinity (<= 0 if finite there)."""
    return f.num.degree - f.den.degree


def _x_map_infinity_multiplicity(x: RatFunc) -> int:
    """Local degree of the x-projection at z=infinity."""
    po = _pole_order_at_infinity(x)
    if po > 0:
        return po
    # finite value: multiplicity = order of vanishing of X(1/u) - X(inf) at u=0
    u = RatFunc.gen(QQ_FIELD, "u")
    xu = x.compose(u.inverse())
    val = xu.num.coeff(0) / xu.den.coeff(0)
    diff = xu - RatFunc.const(QQ_FIELD, val, "u")
    k = 0
    num = diff.num
    while k <= num.degree and num.field.is_zero(num.coeff(k)):
        k += 1
    return k


def _has_dform_zero_at_infinity(f: RatFunc) -> bool:
    """True iff the differential df has a zero at z=infinity."""
    if _pole_order_at_infinity(f) > 0:
        return False
    return _x_map_infinity_multiplicity(f) >= 2


def ramification_locus(param: Parametrization) -> RamificationLocus:
    x, y = param.X, param.Y
    xp = x.derivative()
    # finite zeros of dx: roots of the reduced numerator of x' that are not
    # poles of x
    fz = squarefree_part(xp.num) if not xp.num.is_zero() else UniPoly.const(QQ_FIELD, Fraction(1))
    g = poly_gcd(fz, x.den)
    if g.degree > 0:
        fz = fz.exact_div(g)
    # finite poles of x of order >= 2
    pole_facs = [p for p, e in squarefree_factorization(x.den) if e >= 2]
    fp = UniPoly.const(QQ_FIELD, Fraction(1))
    for p in pole_facs:
        fp = fp * p
    finite: list[tuple[UniPoly, RamKind]] = []
    if fz.degree > 0:
        finite.append((fz.monic(), RamKind.ZERO_OF_DX))
    if fp.degree > 0:
        finite.append((fp.monic(), RamKind.POLE_OF_X))
    inf_kind: RamKind | None = None
    if _pole_order_at_infinity(x) >= 2:
        inf_kind = RamKind.POLE_OF_X
    elif _x_map_infinity_multiplicity(x) >= 2:
        inf_kind = RamKind.ZERO_OF_DX
    punct = squarefree_part(x.den * y.den) if (x.den.degree or y.den.degree) else UniPoly.const(QQ_FIELD, Fraction(1))
    punct_inf = _pole_order_at_infinity(x) > 0 or _pole_order_at_infinity(y) > 0
    return RamificationLocus(
        finite_factors=tuple(finite),
        infinity=inf_kind,
        puncture_poly=punct.monic() if punct.degree > 0 else punct,
        puncture_at_infinity=punct_inf,
    )


def cosheet_polynomial(param: Parametrization) -> list[RatFunc]:
    """The monic polynomial M~(w; z) of degree r-1 whose roots are the other
    preimages of x(z); returned as its coefficient list over QQ(z), ascending
    in w.

    M~(w; z) = numerator_w(X(w) - X(z)) / (w - z), an exact division.
    """
    x = param.X
    r = max(x.num.degree, x.den.degree)
    from .poly import RatFuncField

    Kz = RatFuncField(QQ_FIELD, "z")
    # numerator_w(X(w) - X(z)) = Xn(w)*Xd(z) - Xn(z)*Xd(w), coefficients in QQ(z)
    coeffs: list[RatFunc] = []
    deg = max(x.num.degree, x.den.degree)
    xn_z = RatFunc.from_poly(x.num)
    xd_z = RatFunc.from_poly(x.den)
    for i in range(deg + 1):
        a = x.num.coeff(i)  # coefficient of w^i in Xn(w)
        b = x.den.coeff(i)
        c = Kz.from_fraction(a) * xd_z - xn_z * Kz.from_fraction(b)
        coeffs.append(c)
    m_full = UniPoly(Kz, coeffs, "w")
    if m_full.degree != r:
        raise WrongDegreeError(
            "fiber polynomial has w-degree %d, expected %d" % (m_full.degree, r)
        )
    lin = UniPoly(Kz, [-Kz.gen(), Kz.one], "w")  # (w - z)
    mt = m_full.exact_div(lin)
    mt = mt.monic()
    if mt.degree != r - 1:
        raise WrongDegreeError("cosheet polynomial degree %d != r-1" % mt.degree)
    return list(mt.coeffs)


def _check_cosheet_squarefree(coeffs: list[RatFunc]) -> None:
    from .poly import RatFuncField

    Kz = RatFuncField(QQ_FIELD, "z")
    m = UniPoly(Kz, coeffs, "w")
    g = poly_gcd(m, m.derivative())
    if g.degree != 0:
        raise BadBranchPointsError("cosheet polynomial is not squarefree over QQ(z)")


def validate_parametrization(plane: PlanePolynomial, param: Parametrization) -> None:
    """Checks P(X,Y) = 0, x-map degree r, and disjoint zeros of dx, dy."""
    value = plane.eval_rational(param.X, param.Y)
    if not value.is_zero():
        raise NotOnCurveError("P(X(z), Y(z)) is not identically zero")
    deg = max(param.X.num.degree, param.X.den.degree)
    if deg != plane.r:
        raise WrongDegreeError(
            "x-map degree %d does not match y-degree r = %d of P" % (deg, plane.r)
        )
    xz = _dform_zero_factor(param.X)
    yz = _dform_zero_factor(param.Y)
    g = poly_gcd(xz, yz)
    if g.degree > 0:
        raise BadBranchPointsError("dx and dy share a finite zero along %r" % g)
    if _has_dform_zero_at_infinity(param.X) and _has_dform_zero_at_infinity(param.Y):
        raise BadBranchPointsError("dx and dy share a zero at z=infinity")


def _dform_zero_factor(f: RatFunc) -> UniPoly:
    """Squarefree polynomial whose roots are the finite zeros of df."""
    fp = f.derivative()
    if fp.num.is_zero():
        raise BadBranchPointsError("constant coordinate function")
    fz = squarefree_part(fp.num)
    g = poly_gcd(fz, f.den)
    if g.degree > 0:
        fz = fz.exact_div(g)
    return fz


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    interior_count: int
    row_widths: tuple[int, ...]
    origin_on_curve: bool
    origin_smooth: bool
    reasons: tuple[str, ...]


def admissibility_check(plane: PlanePolynomial, polygon: NewtonPolygon) -> AdmissibilityReport:
    reasons: list[str] = []
    r = plane.r
    widths = tuple(
        polygon.beta_ceil[i] - polygon.alpha_floor[i] for i in range(1, r)
    )
    if polygon.interior_count != 0:
        reasons.append(
            "Newton polygon has %d interior lattice point(s)" % polygon.interior_count
        )
    origin_on = plane.value_at_origin() == 0
    origin_smooth = True
    if origin_on:
        gx, gy = plane.gradient_at_origin()
        origin_smooth = not (gx == 0 and gy == 0)
        if not origin_smooth:
            reasons.append("curve passes through the origin and is singular there")
    return AdmissibilityReport(
        admissible=not reasons,
        interior_count=polygon.interior_count,
        row_widths=widths,
        origin_on_curve=origin_on,
        origin_smooth=origin_smooth,
        reasons=tuple(reasons),
    )


@dataclass(frozen=True)
class SpectralCurve:
    name: str
    plane: PlanePolynomial
    param: Parametrization
    polygon: NewtonPolygon
    ramification: RamificationLocus
    cosheet_coeffs: tuple[RatFunc, ...]

    @staticmethod
    def build(name: str, plane: PlanePolynomial, param: Parametrization) -> "SpectralCurve":
        validate_parametrization(plane, param)
        polygon = newton_polygon(plane)
        report = admissibility_check(plane, polygon)
        if not report.admissible:
            raise NotAdmissibleError("; ".join(report.reasons))
        ram = ramification_locus(param)
        cosheet = cosheet_polynomial(param)
        if plane.r >= 2:
            _check_cosheet_squarefree(list(cosheet))
        return SpectralCurve(
            name=name,
            plane=plane,
            param=param,
            polygon=polygon,
            ramification=ram,
            cosheet_coeffs=tuple(cosheet),
        )

    @property
    def r(self) -> int:
        return self.plane.r

    def p_at_param(self, k: int) -> RatFunc:
        """p_k(X(z)) as a rational function of z."""
        pk = self.plane.p(k)
        if pk.is_zero():
            return RatFunc.const(QQ_FIELD, Fraction(0), self.param.X.var)
        return RatFunc.from_poly(pk).compose(self.param.X)

    def partial_y_at_param(self) -> RatFunc:
        return self.plane.eval_partial_y(self.param.X, self.param.Y)

    def pm_function(self, m: int) -> RatFunc:
        """P_m(X(z), Y(z)) with P_m = sum_{k=1}^{m-1} p_{m-1-k}(x) y^k."""
        acc = RatFunc.const(QQ_FIELD, Fraction(0), self.param.X.var)
        for k in range(1, m):
            pk = self.plane.p(m - 1 - k)
            if pk.is_zero():
                continue
            acc = acc + RatFunc.from_poly(pk).compose(self.param.X) * self.param.Y**k
        return acc


def pm_bound_check(curve: SpectralCurve, m: int) -> bool:
    """True iff P_m(X,Y)/X^floor(alpha_{r-m+1}) has poles only at poles of X."""
    if not (2 <= m <= curve.r):
        raise ValueError("m out of range")
    h = curve.pm_function(m)
    a = curve.polygon.alpha_floor[curve.r - m + 1]
    x = curve.param.X
    expr = h / x**a if a >= 0 else h * x ** (-a)
    den = expr.den
    if den.degree > 0:
        sf = squarefree_part(den)
        xden_sf = squarefree_part(x.den) if x.den.degree > 0 else None
        if xden_sf is None:
            return False
        if not (poly_gcd(sf, xden_sf) == sf):
            return False
    if _pole_order_at_infinity(x) <= 0 and _pole_order_at_infinity(expr) > 0:
        return False
    return True
