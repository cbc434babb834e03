"""Exact univariate polynomials and rational functions over a scalar field.

``UniPoly`` stores coefficients by ascending degree with no trailing zeros;
the zero polynomial has an empty coefficient tuple and degree ``-1`` (the
degree sentinel).  ``RatFunc`` keeps a canonical fraction: the denominator is
monic and coprime to the numerator, so equality is plain coefficient-wise
comparison.

Both classes are generic over the coefficient field (see
:mod:`toprec.scalars`); in particular the coefficients may themselves be
rational functions or quotient-ring elements, which is how the field towers
QQ -> QQ(z) -> QQ(z)[w]/(m(w)) used by the recursion engine are built.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Sequence

from .scalars import QQ_FIELD, Scalar, ScalarField


class NotInvertibleError(ArithmeticError):
    """A quotient-ring element with nonunit gcd against the modulus.

    Signals a non-generic degeneracy (for instance a pole sitting identically
    on a sheet).  Callers must abort with a diagnostic, never retry with a
    perturbed input.
    """


class UniPoly:
    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: ScalarField, coeffs: Sequence[Scalar], var: str = "z"):
        n = len(coeffs)
        while n > 0 and field.is_zero(coeffs[n - 1]):
            n -= 1
        self.field = field
        self.coeffs = tuple(coeffs[:n])
        self.var = var

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(field: ScalarField, var: str = "z") -> "UniPoly":
        return UniPoly(field, (), var)

    @staticmethod
    def const(field: ScalarField, c: Scalar, var: str = "z") -> "UniPoly":
        return UniPoly(field, (c,), var)

    @staticmethod
    def gen(field: ScalarField, var: str = "z") -> "UniPoly":
        return UniPoly(field, (field.zero, field.one), var)

    @staticmethod
    def from_int_coeffs(ints: Iterable[int], var: str = "z") -> "UniPoly":
        return UniPoly(QQ_FIELD, [Fraction(c) for c in ints], var)

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Scalar:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(self.field, out, self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.field, [-c for c in self.coeffs], self.var)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.field, self.var)
        fz = self.field.zero
        out = [fz] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if self.field.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out, self.var)

    def scale(self, c: Scalar) -> "UniPoly":
        return UniPoly(self.field, [c * a for a in self.coeffs], self.var)

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly.const(self.field, self.field.one, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by var**k."""
        if self.is_zero():
            return self
        return UniPoly(self.field, (self.field.zero,) * k + self.coeffs, self.var)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        fld = self.field
        inv_lc = fld.invert(other.lc)
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return UniPoly.zero(fld, self.var), self
        quot = [fld.zero] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if fld.is_zero(c):
                continue
            q = c * inv_lc
            quot[i - db] = q
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - q * b
        return UniPoly(fld, quot, self.var), UniPoly(fld, rem[:db], self.var)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division of %r by %r is not exact" % (self, other))
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.field.is_zero(self.lc - self.field.one):
            return self
        return self.scale(self.field.invert(self.lc))

    def derivative(self) -> "UniPoly":
        fld = self.field
        out = [fld.from_int(i) * c for i, c in enumerate(self.coeffs)][1:]
        return UniPoly(fld, out, self.var)

    def eval(self, x: Any) -> Any:
        """Horner evaluation; ``x`` may live in any ring containing the
        coefficients (tower elements, sympy fractions, Fractions)."""
        if not self.coeffs:
            return self.field.zero
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f, field: ScalarField, var: str | None = None) -> "UniPoly":
        return UniPoly(field, [f(c) for c in self.coeffs], var or self.var)

    def __repr__(self) -> str:
        from .printing import poly_str

        return poly_str(self)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor by the Euclidean algorithm.

    gcd(0, 0) = 0.  Remainders are made monic at every step, which keeps the
    coefficient growth inside the scalar field's own normalization.
    """
    while not b.is_zero():
        r = a % b
        if not r.is_zero():
            r = r.monic()
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def poly_ext_gcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    fld = a.field
    one = UniPoly.const(fld, fld.one, a.var)
    zero = UniPoly.zero(fld, a.var)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = fld.invert(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def squarefree_factorization(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm over a field of characteristic zero.

    Returns pairs (factor, multiplicity) with the factors monic, squarefree
    and pairwise coprime; the unit content is dropped.
    """
    if p.is_zero():
        raise ValueError("squarefree factorization of the zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    out: list[tuple[UniPoly, int]] = []
    if g.degree == 0:
        return [(p, 1)]
    c = p.exact_div(g)
    d = dp.exact_div(g) - c.derivative()
    i = 1
    while not (c.degree == 0):
        f = poly_gcd(c, d)
        if f.degree > 0:
            out.append((f, i))
        c = c.exact_div(f) if f.degree > 0 else c
        d = d.exact_div(f) if f.degree > 0 else d
        d = d - c.derivative()
        i += 1
    return out


def squarefree_part(p: UniPoly) -> UniPoly:
    """Product of the distinct monic irreducible factors of p."""
    out = UniPoly.const(p.field, p.field.one, p.var)
    for f, _ in squarefree_factorization(p):
        out = out * f
    return out


class RatFunc:
    """Canonical fraction num/den: den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly | None = None, *, _canonical: bool = False):
        if den is None:
            den = UniPoly.const(num.field, num.field.one, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = UniPoly.const(num.field, num.field.one, num.var)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                if not num.field.is_zero(den.lc - num.field.one):
                    c = num.field.invert(den.lc)
                    num = num.scale(c)
                    den = den.scale(c)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_poly(p: UniPoly) -> "RatFunc":
        return RatFunc(p, None, _canonical=True)

    @staticmethod
    def const(field: ScalarField, c: Scalar, var: str = "z") -> "RatFunc":
        return RatFunc.from_poly(UniPoly.const(field, c, var))

    @staticmethod
    def gen(field: ScalarField, var: str = "z") -> "RatFunc":
        return RatFunc.from_poly(UniPoly.gen(field, var))

    @property
    def field(self) -> ScalarField:
        return self.num.field

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _canonical=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def scale(self, c: Scalar) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den)

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def eval(self, x: Any) -> Any:
        """Evaluate at a scalar of any compatible ring; raises
        ZeroDivisionError on a pole."""
        den = self.den.eval(x)
        num = self.num.eval(x)
        return num / den

    def compose(self, inner: "RatFunc") -> "RatFunc":
        """self(inner(z)) as an exact rational function."""
        fld = self.field
        dmax = max(self.num.degree, self.den.degree, 0)
        # N(inner)/D(inner), both cleared by inner.den**dmax
        def clear(p: UniPoly) -> RatFunc:
            acc = RatFunc.const(fld, fld.zero, inner.var)
            for i, c in enumerate(p.coeffs):
                term = RatFunc.from_poly((inner.num**i) * (inner.den ** (dmax - i)).scale(c))
                acc = acc + term
            return acc

        num = clear(self.num)
        den = clear(self.den)
        return num / den

    def __repr__(self) -> str:
        from .printing import ratfunc_str

        return ratfunc_str(self)


class RatFuncField(ScalarField):
    """The field of rational functions in one variable over ``base``.

    Elements are ``RatFunc`` instances; stacking these builds the towers
    QQ(z), QQ(z)(w), ... used in tests and available to the engine.
    """

    def __init__(self, base: ScalarField, var: str = "z"):
        self.base = base
        self.var = var

    def from_int(self, n: int) -> RatFunc:
        return RatFunc.const(self.base, self.base.from_int(n), self.var)

    def from_fraction(self, q: Fraction) -> RatFunc:
        return RatFunc.const(self.base, self.base.from_fraction(q), self.var)

    def is_zero(self, e: RatFunc) -> bool:
        return e.is_zero()

    def invert(self, e: RatFunc) -> RatFunc:
        return e.inverse()

    def gen(self) -> RatFunc:
        return RatFunc.gen(self.base, self.var)

    def __repr__(self) -> str:
        return "%r(%s)" % (self.base, self.var)
