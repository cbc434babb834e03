"""Quotient rings K[w]/(m) and the trace machinery for sums over roots.

A ``QuotientRing`` is itself a scalar field in the sense of
:mod:`toprec.scalars`, so rings can be stacked: adjoining one root of the
cosheet polynomial, then a root of its deflation, and so on.  The moduli need
not be irreducible; arithmetic works in the product of fields, and inverting
an actual zero divisor raises :class:`~toprec.poly.NotInvertibleError`, which
is treated as fatal by every caller.

``trace_mod`` evaluates the sum of f over the roots of the modulus via Newton
power sums, which stays inside the base field and never touches the roots
themselves.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import NotInvertibleError, UniPoly, poly_ext_gcd, poly_gcd
from .scalars import Scalar, ScalarField


class QuotElem:
    __slots__ = ("ring", "poly")

    def __init__(self, ring: "QuotientRing", poly: UniPoly):
        self.ring = ring
        self.poly = poly

    def __add__(self, other: "QuotElem") -> "QuotElem":
        return QuotElem(self.ring, self.poly + other.poly)

    def __sub__(self, other: "QuotElem") -> "QuotElem":
        return QuotElem(self.ring, self.poly - other.poly)

    def __neg__(self) -> "QuotElem":
        return QuotElem(self.ring, -self.poly)

    def __mul__(self, other: "QuotElem") -> "QuotElem":
        return QuotElem(self.ring, (self.poly * other.poly) % self.ring.modulus)

    def __truediv__(self, other: "QuotElem") -> "QuotElem":
        return self * self.ring.invert(other)

    def __pow__(self, n: int) -> "QuotElem":
        if n < 0:
            return self.ring.invert(self) ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuotElem) and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __repr__(self) -> str:
        return "[%r mod %s]" % (self.poly, self.ring.var)


class QuotientRing(ScalarField):
    """K[w]/(modulus) with the modulus monic over the scalar field K."""

    def __init__(self, base: ScalarField, modulus: UniPoly, var: str = "w"):
        if modulus.is_zero() or modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if not base.is_zero(modulus.lc - base.one):
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.var = var
        self._power_sums: list[Scalar] | None = None

    # -- scalar-field interface -----------------------------------------

    def from_int(self, n: int) -> QuotElem:
        return QuotElem(self, UniPoly.const(self.base, self.base.from_int(n), self.var))

    def from_fraction(self, q: Fraction) -> QuotElem:
        return QuotElem(self, UniPoly.const(self.base, self.base.from_fraction(q), self.var))

    def from_base(self, c: Scalar) -> QuotElem:
        return QuotElem(self, UniPoly.const(self.base, c, self.var))

    def is_zero(self, e: QuotElem) -> bool:
        return e.poly.is_zero()

    def invert(self, e: QuotElem) -> QuotElem:
        return modular_inverse(e)

    @property
    def gen(self) -> QuotElem:
        return QuotElem(self, UniPoly.gen(self.base, self.var) % self.modulus)

    def reduce(self, p: UniPoly) -> QuotElem:
        return QuotElem(self, p % self.modulus)

    def is_squarefree(self) -> bool:
        g = poly_gcd(self.modulus, self.modulus.derivative())
        return g.degree == 0

    # -- traces -----------------------------------------------------------

    def power_sums(self) -> list[Scalar]:
        """Newton power sums s_0..s_{d-1} of the modulus roots, s_k = sum of
        (root_i)**k, computed from the coefficients alone."""
        if self._power_sums is not None:
            return self._power_sums
        m = self.modulus
        d = m.degree
        base = self.base
        a = [m.coeff(i) for i in range(d + 1)]  # monic: a[d] = 1
        s: list[Scalar] = [base.from_int(d)]
        for k in range(1, d):
            acc = base.from_int(k) * a[d - k]
            for i in range(1, k):
                acc = acc + a[d - i] * s[k - i]
            s.append(-acc)
        self._power_sums = s
        return s

    def __repr__(self) -> str:
        return "%r[%s]/(deg %d)" % (self.base, self.var, self.modulus.degree)


def modular_inverse(e: QuotElem) -> QuotElem:
    """Inverse in K[w]/(m) by extended Euclid; for elements of degree one a
    closed synthetic-division form avoids the full remainder sequence.

    Raises :class:`NotInvertibleError` when gcd(e, m) is not a unit.
    """
    ring = e.ring
    p = e.poly
    base = ring.base
    if p.is_zero():
        raise NotInvertibleError("zero is not invertible in %r" % ring)
    if p.degree == 0:
        return QuotElem(ring, UniPoly.const(base, base.invert(p.coeff(0)), ring.var))
    if p.degree == 1:
        # p = a*(w - c); 1/(w - c) = -q_c(w)/m(c) with q_c = (m(w)-m(c))/(w-c)
        a = p.coeff(1)
        c = -(p.coeff(0) * base.invert(a))
        m = ring.modulus
        d = m.degree
        q = [base.zero] * d
        acc = m.coeff(d)
        for i in range(d - 1, -1, -1):
            q[i] = acc
            acc = acc * c + m.coeff(i)
        mc = acc  # m(c)
        if base.is_zero(mc):
            raise NotInvertibleError(
                "element %r is a zero divisor of %r (modulus vanishes at the shift)"
                % (e, ring)
            )
        scale = -(base.invert(mc) * base.invert(a))
        return QuotElem(ring, UniPoly(base, q, ring.var).scale(scale))
    g, s, _t = poly_ext_gcd(p, ring.modulus)
    if g.degree != 0:
        raise NotInvertibleError("gcd(%r, modulus) has degree %d" % (e, g.degree))
    return QuotElem(ring, s.scale(base.invert(g.coeff(0))) % ring.modulus)


def trace_mod(e: QuotElem) -> Scalar:
    """Sum of e over the roots of the (squarefree) modulus, as a base-field
    element: the trace of the multiplication-by-e endomorphism."""
    ring = e.ring
    s = ring.power_sums()
    base = ring.base
    acc = base.zero
    for i, c in enumerate(e.poly.coeffs):
        acc = acc + c * s[i]
    return acc
