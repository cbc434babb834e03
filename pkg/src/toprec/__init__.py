"""Exact topological recursion, quantum curves and r-spin intersection
numbers for admissible genus-zero spectral curves."""

from .poly import NotInvertibleError, RatFunc, RatFuncField, UniPoly, poly_gcd, squarefree_factorization
from .quotient import QuotientRing, modular_inverse, trace_mod
from .residues import (
    LogarithmicPartError,
    rational_antiderivative,
    residue_at_infinity,
    residue_sum_at_roots,
)
from .curves import (
    AdmissibilityReport,
    NewtonPolygon,
    Parametrization,
    PlanePolynomial,
    RamKind,
    SpectralCurve,
    admissibility_check,
    newton_polygon,
    pm_bound_check,
    ramification_locus,
    validate_parametrization,
)

__all__ = [
    "NotInvertibleError",
    "RatFunc",
    "RatFuncField",
    "UniPoly",
    "poly_gcd",
    "squarefree_factorization",
    "QuotientRing",
    "modular_inverse",
    "trace_mod",
    "LogarithmicPartError",
    "rational_antiderivative",
    "residue_at_infinity",
    "residue_sum_at_roots",
    "AdmissibilityReport",
    "NewtonPolygon",
    "Parametrization",
    "PlanePolynomial",
    "RamKind",
    "SpectralCurve",
    "admissibility_check",
    "newton_polygon",
    "pm_bound_check",
    "ramification_locus",
    "validate_parametrization",
]
