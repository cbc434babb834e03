"""Coefficient fields for the exact-arithmetic towers.

Every polynomial and rational-function class in this package is generic over
a *scalar field*: an object describing the field its coefficients live in.
Scalar elements are ordinary Python objects supporting ``+ - * /`` and ``==``;
the field object supplies the constants and conversions that cannot be
expressed through operators alone.

Three families of scalar fields are used:

* :data:`QQ_FIELD` -- the rationals, elements are ``fractions.Fraction``;
* :class:`FunctionField` -- a multivariate rational function field
  QQ(v1, ..., vk) backed by sympy's sparse polynomial rings (elements are
  ``FracElement``); these hold the spectator variables of a correlator;
* the quotient rings of :mod:`toprec.quotient` and the rational function
  fields of :mod:`toprec.poly`, which are themselves scalar fields, so that
  towers QQ -> QQ(z) -> QQ(z)[w]/(m) can be stacked to any depth.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import sympy
from sympy.polys.fields import field as _sym_field

Scalar = Any


class ScalarField:
    """Base interface; concrete fields override all methods."""

    def from_int(self, n: int) -> Scalar:
        raise NotImplementedError

    def from_fraction(self, q: Fraction) -> Scalar:
        raise NotImplementedError

    def is_zero(self, e: Scalar) -> bool:
        raise NotImplementedError

    def invert(self, e: Scalar) -> Scalar:
        raise NotImplementedError

    @property
    def zero(self) -> Scalar:
        return self.from_int(0)

    @property
    def one(self) -> Scalar:
        return self.from_int(1)


class RationalField(ScalarField):
    """QQ with ``Fraction`` elements."""

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_fraction(self, q: Fraction) -> Fraction:
        return q

    def is_zero(self, e: Fraction) -> bool:
        return e == 0

    def invert(self, e: Fraction) -> Fraction:
        return Fraction(1) / e

    def __repr__(self) -> str:
        return "QQ"


QQ_FIELD = RationalField()


class FunctionField(ScalarField):
    """QQ(v1, ..., vk) as a flat sympy fraction field.

    ``names`` fixes the generator order; elements are sympy ``FracElement``
    objects, which reduce to lowest terms on every operation.
    """

    def __init__(self, names: tuple[str, ...]):
        if not names:
            raise ValueError("FunctionField needs at least one generator")
        self.names = tuple(names)
        got = _sym_field(",".join(names), sympy.QQ)
        self.field = got[0]
        self.gens = tuple(got[1:])
        self.ring = self.field.ring

    def from_int(self, n: int) -> Scalar:
        return self.field.ground_new(sympy.QQ(n))

    def from_fraction(self, q: Fraction) -> Scalar:
        return self.field.ground_new(sympy.QQ(q.numerator, q.denominator))

    def is_zero(self, e: Scalar) -> bool:
        return not e

    def invert(self, e: Scalar) -> Scalar:
        if not e:
            raise ZeroDivisionError("inverse of zero in %r" % self)
        return self.from_int(1) / e

    def gen(self, name: str) -> Scalar:
        return self.gens[self.names.index(name)]

    def __repr__(self) -> str:
        return "QQ(%s)" % ",".join(self.names)


_FUNCTION_FIELD_CACHE: dict[tuple[str, ...], FunctionField] = {}


def function_field(names: tuple[str, ...]) -> FunctionField:
    """Cached constructor; sympy ring creation is not free."""
    ff = _FUNCTION_FIELD_CACHE.get(names)
    if ff is None:
        ff = FunctionField(names)
        _FUNCTION_FIELD_CACHE[names] = ff
    return ff


def qq_to_sym(q: Fraction):
    return sympy.QQ(q.numerator, q.denominator)


def sym_to_fraction(e) -> Fraction:
    """Convert a sympy QQ element (mpq) to ``Fraction``."""
    return Fraction(int(e.numerator), int(e.denominator))
