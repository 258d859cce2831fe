"""Shared helpers for the family modules.

Symbol conventions used by the closed forms:

* ``n``  — the size parameter (interval length, permutation length, ...)
* ``W``  — stands for 2^n (boolean family)
* ``w``  — stands for 2^(n-1) (boolean binomial-moment recurrence)
* ``mu`` — the domino mean m*n - m/2 - n/2

``log_centered_kernel`` is the z-series of log((2+z) / (2*sqrt(1+z))),
the shared multiplicative step of the centered generating functions of
both the 1-by-n board (power n-1) and the boolean 0-cube count
(power 2^n).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from momentforge.poly_series import (
    Polynomial,
    TruncatedSeries,
    generalized_binomial_series,
    log_series,
)

SYMBOL_LEGEND = {
    "n": "size parameter",
    "q": "generating-function variable",
    "z": "shift variable (q = 1 + z)",
    "W": "2^n",
    "w": "2^(n-1)",
    "mu": "m*n - m/2 - n/2",
}


@lru_cache(maxsize=None)
def log_centered_kernel(order: int) -> TruncatedSeries:
    """z-series of log((2 + z) / (2*sqrt(1+z))): z^2/8 - z^3/8 + ..."""
    z = TruncatedSeries.variable(order)
    half = generalized_binomial_series(Fraction(-1, 2), order)
    return log_series((1 + z / 2) * half)


def eval_at_n(value, n: int) -> Fraction:
    """Collapse nested polynomials to an exact rational at integer n.

    The outer symbol decides the substitution: W -> 2^n, w -> 2^(n-1),
    n -> n.  ``mu`` is rejected here (it needs both board dimensions).
    """
    while isinstance(value, Polynomial):
        sym = value.symbol
        if sym == "W":
            point: Fraction | int = Fraction(2**n)
        elif sym == "w":
            point = Fraction(2 ** (n - 1))
        elif sym == "n":
            point = Fraction(n)
        else:
            raise ValueError(f"cannot evaluate symbol {sym!r} from n alone")
        value = value.eval(point)
    return value


def w_to_big_w(poly: Polynomial) -> Polynomial:
    """Rewrite a polynomial in w = 2^(n-1) as a polynomial in W = 2^n."""
    if poly.symbol != "w":
        raise ValueError(f"expected a polynomial in 'w', got {poly.symbol!r}")
    half_W = Polynomial("W", (0, Fraction(1, 2)))
    return poly.compose(half_W)
