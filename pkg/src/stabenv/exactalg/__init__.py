"""Exact arithmetic kernel: rationals, sparse polynomials, rational functions, series."""

from .fracsum import LinearFactorSum
from .poly import (
    MultiPoly,
    NotDivisible,
    VarSet,
    exact_divide,
    poly_gcd,
    try_exact_divide,
)
from .rational import (
    DenominatorVanishes,
    IndeterminateInternal,
    PoleAtZero,
    RationalFunction,
    rational_limit_at_zero,
    substitute,
)
from .series import ConstantTermNotSquare, TruncatedSeries, series_sqrt

__all__ = [
    "VarSet",
    "MultiPoly",
    "RationalFunction",
    "TruncatedSeries",
    "LinearFactorSum",
    "poly_gcd",
    "exact_divide",
    "try_exact_divide",
    "substitute",
    "rational_limit_at_zero",
    "series_sqrt",
    "NotDivisible",
    "DenominatorVanishes",
    "PoleAtZero",
    "IndeterminateInternal",
    "ConstantTermNotSquare",
]
