"""Residues, principal parts and antiderivatives of rational one-forms.

Everything here works on ``RatFunc`` in one variable over an arbitrary scalar
field and is exact.  Higher-order poles are brought down to simple poles by
Hermite reduction (repeatedly trading p**e denominators for p**(e-1) modulo
exact derivatives), and the resulting simple-pole residue sums are evaluated
as traces in K[w]/(p) -- the roots of p are never constructed, so algebraic
ramification points cost nothing extra.
"""

from __future__ import annotations

from .poly import RatFunc, UniPoly, poly_ext_gcd, poly_gcd, squarefree_factorization
from .quotient import QuotientRing, modular_inverse, trace_mod
from .scalars import Scalar, ScalarField


class LogarithmicPartError(ArithmeticError):
    """The form has a nonzero residue, so its primitive is not rational."""


def split_power_factor(den: UniPoly, p: UniPoly) -> tuple[int, UniPoly]:
    """Write den = p**e * rest with p not dividing rest; returns (e, rest)."""
    e = 0
    rest = den
    while True:
        q, r = rest.divmod(p)
        if not r.is_zero():
            return e, rest
        e += 1
        rest = q


def principal_part_at(f: RatFunc, p: UniPoly) -> tuple[UniPoly, int]:
    """The component A/p**e of the partial-fraction decomposition of f that
    is supported on the roots of p; returns (A, e) with deg A < e*deg p.

    Requires gcd(p, den/p**e) = 1, which holds whenever p is a squarefree
    factor of a factored denominator.  (A, 0) means no pole on p.
    """
    e, rest = split_power_factor(f.den, p)
    if e == 0:
        return UniPoly.zero(f.num.field, f.num.var), 0
    pe = p**e
    g, _s, t = poly_ext_gcd(pe, rest)
    if g.degree != 0:
        raise ValueError("p**e and the cofactor are not coprime")
    # 1 = s*p**e + t*rest  =>  num/(p**e*rest) = num*s/rest + num*t/p**e
    a = (f.num * t) % pe
    return a, e


def _residue_class_reduce(a: UniPoly, p: UniPoly, e: int) -> UniPoly:
    """Reduce a/p**e modulo exact derivatives and polynomials to c/p with
    deg c < deg p, preserving all residues at the roots of p."""
    dp = p.derivative()
    g, u, v = poly_ext_gcd(p, dp)
    if g.degree != 0:
        raise ValueError("factor is not squarefree")
    fld = a.field
    while e > 1:
        av = (a * v) % (p**e)
        a = a * u + av.derivative().scale(fld.invert(fld.from_int(e - 1)))
        e -= 1
        a = a % (p**e)
    return a % p


def residue_sum_at_roots(f: RatFunc, p: UniPoly) -> Scalar:
    """Sum over the roots a of squarefree p of Res_{z=a} f(z) dz.

    Roots of p that are not poles of f contribute zero.  Implemented by
    Hermite reduction of the p-power part to simple poles followed by a
    trace of numerator/p' in K[w]/(p).
    """
    a, e = principal_part_at(f, p)
    if e == 0 or a.is_zero():
        return f.num.field.zero
    c = _residue_class_reduce(a, p, e)
    if c.is_zero():
        return f.num.field.zero
    ring = QuotientRing(f.num.field, p.monic(), "@" + f.num.var)
    num = ring.reduce(c.map_coeffs(lambda x: x, f.num.field, "@" + f.num.var))
    dp = ring.reduce(p.derivative().map_coeffs(lambda x: x, f.num.field, "@" + f.num.var))
    return trace_mod(num * modular_inverse(dp))


def power_series_inverse(d: UniPoly, n: int) -> list[Scalar]:
    """First n coefficients of 1/d(u) at u=0; d(0) must be a unit."""
    fld = d.field
    c0 = d.coeff(0)
    inv0 = fld.invert(c0)
    out = [inv0]
    for k in range(1, n):
        acc = fld.zero
        for j in range(1, min(k, d.degree) + 1):
            acc = acc + d.coeff(j) * out[k - j]
        out.append(-(inv0 * acc))
    return out


def series_quotient(num: UniPoly, den: UniPoly, n: int) -> list[Scalar]:
    """First n coefficients of num/den as a power series at 0 (den(0) unit)."""
    inv = power_series_inverse(den, n)
    fld = num.field
    out = []
    for k in range(n):
        acc = fld.zero
        for j in range(0, min(k, num.degree) + 1):
            acc = acc + num.coeff(j) * inv[k - j]
        out.append(acc)
    return out


def _strip_zero_valuation(p: UniPoly) -> tuple[int, UniPoly]:
    """p = var**v * unit-part with unit-part(0) != 0; returns (v, unit-part)."""
    v = 0
    while v <= p.degree and p.field.is_zero(p.coeff(v)):
        v += 1
    return v, UniPoly(p.field, p.coeffs[v:], p.var)


def laurent_at_infinity(f: RatFunc, depth: int) -> list[Scalar]:
    """Coefficients [c_1, ..., c_depth] of the expansion
    f(z) = ... + c_1/z + c_2/z**2 + ... at z = infinity, ignoring the
    polynomial part."""
    if f.is_zero():
        return [f.num.field.zero] * depth
    n, d = f.num, f.den
    # f(1/u) = u**(deg d - deg n) * nrev(u)/drev(u), with reversed coefficient
    # tuples; drev(0) = lc(d) != 0.
    nrev = UniPoly(n.field, tuple(reversed(n.coeffs)), "u")
    drev = UniPoly(d.field, tuple(reversed(d.coeffs)), "u")
    shift = d.degree - n.degree
    # coefficient of z**-k = coefficient of u**k in u**shift * nrev/drev
    need = depth - shift + 1
    if need <= 0:
        return [f.num.field.zero] * depth
    ser = series_quotient(nrev, drev, need)
    out = []
    for k in range(1, depth + 1):
        idx = k - shift
        out.append(ser[idx] if 0 <= idx < len(ser) else f.num.field.zero)
    return out


def residue_at_infinity(f: RatFunc) -> Scalar:
    """Res_{z=inf} f(z) dz, i.e. the residue at u=0 after z = 1/u,
    dz = -du/u**2; equals minus the 1/z coefficient of f at infinity."""
    return -laurent_at_infinity(f, 1)[0]


def proper_decomposition(f: RatFunc) -> tuple[UniPoly, RatFunc]:
    """f = poly + proper with deg(proper.num) < deg(proper.den)."""
    q, r = f.num.divmod(f.den)
    return q, RatFunc(r, f.den)


def rational_antiderivative(f: RatFunc) -> RatFunc:
    """Exact primitive F with F' = f, normalized with zero constant term.

    Raises :class:`LogarithmicPartError` when any residue of f dz is nonzero
    (the primitive would need a logarithm).
    """
    fld = f.num.field
    var = f.num.var
    polypart, proper = proper_decomposition(f)
    # Integrate the polynomial part termwise.
    ints = [fld.zero]
    for i, c in enumerate(polypart.coeffs):
        ints.append(c * fld.invert(fld.from_int(i + 1)))
    total = RatFunc.from_poly(UniPoly(fld, ints, var))
    if proper.is_zero():
        return total
    for p, _mult in squarefree_factorization(proper.den):
        if p.degree == 0:
            continue
        a, e = principal_part_at(proper, p)
        if e == 0:
            continue
        dp = p.derivative()
        g, u, v = poly_ext_gcd(p, dp)
        if g.degree != 0:
            raise ValueError("denominator factorization was not squarefree")
        while e > 1:
            av = (a * v) % (p**e)
            total = total - RatFunc(av.scale(fld.invert(fld.from_int(e - 1))), p ** (e - 1))
            a = a * u + av.derivative().scale(fld.invert(fld.from_int(e - 1)))
            e -= 1
            a = a % (p**e)
        a = a % p
        if not a.is_zero():
            raise LogarithmicPartError(
                "form has a nonzero residue along %r; no rational primitive" % p
            )
    # normalize: constant term of the polynomial part is zero by construction
    return total


def infinity_kernel_data(f: RatFunc, max_poly_degree_hint: int | None = None) -> tuple[Scalar, list[Scalar]]:
    """Data for the z=infinity term of a residue kernel sum.

    For the one-form f(z) dz and the third-kind kernel 1/(t - z), the residue
    at z=infinity of f(z) dz/(t - z) equals -sum_{m>=0} g_m t**m where g_m is
    the coefficient of z**(m+1) ... concretely it is determined by the part of
    f that does not vanish at infinity.  Returns (res_infinity, poly_coeffs)
    where poly_coeffs[m] is the coefficient of t**m in the polynomial piece.
    """
    res_inf = residue_at_infinity(f)
    # Res_{z=inf} f(z)/(t-z) dz: substitute z = 1/u, dz = -du/u^2:
    #   kernel 1/(t - 1/u) = u/(tu - 1) = -sum_{m>=0} t**m u**(m+1)
    # so the residue is  sum_m t**m * [coeff of u**(-m-2) in f(1/u)(-1/u^2)]
    #  = sum_m t**m * [coeff of z**m in the polynomial growth of f]... computed
    # from the expansion of f at infinity: f = sum_j a_j z**j + O(1/z):
    # Res_{z=inf} z**j dz/(t-z) = t**j  (check: total residue of z^j/(t-z) is 0,
    # finite pole at z=t gives -t**j).
    q, _r = f.num.divmod(f.den)
    # q is the polynomial part a_0 + a_1 z + ...; but f may also have bounded
    # nonpolynomial growth which contributes only to O(1/z) terms.
    coeffs = list(q.coeffs)
    return res_inf, coeffs
