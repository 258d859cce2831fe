"""Same-number domino counts on random 0/1 boards.

With A = 2mn - m - n domino slots and mu = A/2, every raw moment is the
Stirling sum E[X^r] = sum_i {r brace i} (A)_i / 2^i, a polynomial in mu
alone; the central moments therefore agree across all board shapes with
the same mu.  The 1-by-n board has the explicit centered generating
function G_n(1+z) = [(2+z)/(2 sqrt(1+z))]^(n-1), giving binomial moments
that are polynomials in n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from momentforge.exact_core import falling_factorial, stirling2
from momentforge.families.common import log_centered_kernel
from momentforge.moment_algebra import MomentVector, binomial_to_raw, raw_to_central
from momentforge.poly_series import Polynomial, TruncatedSeries, exp_series

__all__ = [
    "slot_count",
    "mean",
    "raw_moment_symbolic",
    "raw_moments_symbolic",
    "raw_moment",
    "scaled_raw_moment",
    "central_moments_symbolic",
    "central_moments",
    "board1n_p_series",
    "board1n_binomial_moments_symbolic",
    "board1n_binomial_moments",
    "board1n_central_moments",
    "mgf_deviation_1n",
]


def slot_count(m: int, n: int) -> int:
    """A = 2mn - m - n, the number of domino positions."""
    _check(m, n)
    return 2 * m * n - m - n


def mean(m: int, n: int) -> Fraction:
    """mu = mn - m/2 - n/2 = A/2."""
    return Fraction(slot_count(m, n), 2)


@lru_cache(maxsize=None)
def raw_moment_symbolic(r: int) -> Polynomial:
    """E[X^r] as a polynomial in mu: sum_i {r brace i} (2 mu)_i / 2^i."""
    if r < 0:
        raise ValueError("need r >= 0")
    mu = Polynomial.variable("mu")
    acc = Polynomial("mu", (1,) if r == 0 else ())
    for i in range(1, r + 1):
        acc = acc + falling_factorial(2 * mu, i) * Fraction(stirling2(r, i), 2**i)
    return acc


def raw_moments_symbolic(r_max: int) -> MomentVector:
    return MomentVector(
        "raw", [raw_moment_symbolic(r) for r in range(r_max + 1)], family="domino"
    )


def raw_moment(m: int, n: int, r: int) -> Fraction:
    return raw_moment_symbolic(r).eval(mean(m, n))


def scaled_raw_moment(m: int, n: int, r: int) -> int:
    """2^{mn} E[X^r], the integers printed in the data tables."""
    value = raw_moment(m, n, r) * 2 ** (m * n)
    assert value.denominator == 1
    return value.numerator


def central_moments_symbolic(r_max: int) -> MomentVector:
    """E[(X-mu)^r] as polynomials in mu; all odd entries vanish."""
    mu = Polynomial.variable("mu")
    return raw_to_central(raw_moments_symbolic(r_max), mu)


def central_moments(m: int, n: int, r_max: int) -> MomentVector:
    sym = central_moments_symbolic(r_max)
    value = mean(m, n)
    return MomentVector(
        "central",
        [e.eval(value) for e in sym.entries],
        family="domino",
        params={"m": m, "n": n},
    )


@lru_cache(maxsize=None)
def board1n_p_series(order: int) -> TruncatedSeries:
    """P_n(1+z) = (2+z)/(2 sqrt(1+z)) = 1 + z^2/8 - z^3/8 + 15 z^4/128 - ..."""
    return exp_series(log_centered_kernel(order))


@lru_cache(maxsize=None)
def board1n_binomial_moments_symbolic(r_max: int) -> MomentVector:
    """B_r(n) of the 1-by-n board as polynomials in n.

    The product of the P_m(1+z) steps for m = 2..n telescopes to
    exp((n-1) L(z)), whose z-coefficients are the binomial moments.
    """
    kernel = log_centered_kernel(r_max)
    nn = Polynomial.variable("n")
    series = exp_series(kernel * (nn - 1))
    entries = [series.coefficient(r) for r in range(r_max + 1)]
    entries = [e if isinstance(e, Polynomial) else Polynomial.const("n", e) for e in entries]
    return MomentVector("binomial", entries, family="domino", about_mean=True)


def board1n_binomial_moments(n: int, r_max: int) -> MomentVector:
    if n < 1:
        raise ValueError("need n >= 1")
    sym = board1n_binomial_moments_symbolic(r_max)
    return MomentVector(
        "binomial",
        [e.eval(n) for e in sym.entries],
        family="domino",
        params={"m": 1, "n": n},
        about_mean=True,
    )


def board1n_central_moments(n: int, r_max: int) -> MomentVector:
    return binomial_to_raw(board1n_binomial_moments(n, r_max))


def mgf_deviation_1n(n: int, t_values, dps: int = 50):
    """max |cosh(t/(2 sigma))^(n-1) - e^{t^2/2}| with sigma^2 = (n-1)/4."""
    if n < 2:
        raise ValueError("need n >= 2")
    rows = []
    sup = mpmath.mpf(0)
    with mpmath.workdps(max(dps, 50)):
        sigma = mpmath.sqrt(mpmath.mpf(n - 1)) / 2
        for t in t_values:
            tt = mpmath.mpmathify(t)
            target = mpmath.e ** (tt * tt / 2)
            phi = mpmath.cosh(tt / (2 * sigma)) ** (n - 1)
            dev = abs(phi - target)
            rows.append((tt, dev))
            sup = max(sup, dev)
    return sup, rows


def _check(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
