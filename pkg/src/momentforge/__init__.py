"""Exact moment calculus for four families of combinatorial statistics.

Everything downstream of the enumeration oracles is computed in exact
rational arithmetic; floating point appears only in the normality and
MGF-limit reports, at a stated precision.
"""

__version__ = "0.1.0"

from momentforge.exact_core import binomial, falling_factorial, stirling1_signed, stirling2
from momentforge.poly_series import Polynomial, QuasiPolynomial, TruncatedSeries

__all__ = [
    "__version__",
    "binomial",
    "falling_factorial",
    "stirling1_signed",
    "stirling2",
    "Polynomial",
    "QuasiPolynomial",
    "TruncatedSeries",
]
