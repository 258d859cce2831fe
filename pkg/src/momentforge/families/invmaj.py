"""Inversion number and major index over random permutations.

The inversion PGF has the product form F_n(q) = (1/n!) prod (1-q^i)/(1-q);
its centered Taylor coefficients B_r(n) (binomial moments) satisfy

    B_r(n) - B_r(n-1) = sum_{s=1}^r p_s(n) B_{r-s}(n-1)

with p_i(n) = (1/n) sum_s (-1)^s C((n-3)/2 + s, s) C(n, i+1-s), a
polynomial in n.  The major index is handled by the F(n, i) table of
generating functions of permutations ending in i, which also yields the
MacMahon equidistribution check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from momentforge.exact_core import falling_factorial
from momentforge.moment_algebra import MomentVector, binomial_to_raw
from momentforge.poly_series import Polynomial

__all__ = [
    "pgf",
    "mean_variance_polynomials",
    "mean_variance",
    "p_coefficient",
    "binomial_moments",
    "central_moments",
    "maj_table",
    "maj_generating_function",
    "maj_pgf",
    "mgf_deviation",
]


def pgf(n: int) -> Polynomial:
    """Probability generating function of the inversion number over S_n."""
    if n < 1:
        raise ValueError("need n >= 1")
    out = Polynomial("q", (1,))
    for i in range(1, n + 1):
        out = out * Polynomial("q", (1,) * i)
    return out * Fraction(1, math.factorial(n))


def mean_variance_polynomials() -> tuple[Polynomial, Polynomial]:
    """(mu, sigma^2) as polynomials in n: n(n-1)/4 and n(n-1)(2n+5)/72."""
    nn = Polynomial.variable("n")
    mu = nn * (nn - 1) / 4
    var = nn * (nn - 1) * (2 * nn + 5) / 72
    return mu, var


def mean_variance(n: int) -> tuple[Fraction, Fraction]:
    mu, var = mean_variance_polynomials()
    return mu.eval(n), var.eval(n)


@lru_cache(maxsize=None)
def p_coefficient(i: int) -> Polynomial:
    """Coefficient p_i(n) of z^i in P(n, z), exactly, as a polynomial in n."""
    if i < 0:
        raise ValueError("need i >= 0")
    nn = Polynomial.variable("n")
    acc = Polynomial("n", ())
    for s in range(i + 1):
        alpha = (nn - 3) / 2 + s
        upper = falling_factorial(alpha, s) * Fraction(1, math.factorial(s))
        j = i + 1 - s
        lower = falling_factorial(nn, j) * Fraction(1, math.factorial(j))
        term = upper * lower
        acc = acc + (term if s % 2 == 0 else -term)
    return acc.divide_by_symbol()


def binomial_moments(n: int, r_max: int) -> MomentVector:
    """Exact B_r(n) for r <= r_max via the coefficient recurrence.

    Seeded with B_0 = 1 and B_1 = 0 at n = 1 (the PGF of S_1 is constant).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    ps = [p_coefficient(s) for s in range(r_max + 1)]
    current = [Fraction(1)] + [Fraction(0)] * r_max
    for m in range(2, n + 1):
        pvals = [p.eval(m) for p in ps]
        nxt = list(current)
        for r in range(2, r_max + 1):
            delta = Fraction(0)
            for s in range(2, r + 1):  # p_1 = 0 identically
                delta += pvals[s] * current[r - s]
            nxt[r] = current[r] + delta
        current = nxt
    return MomentVector(
        "binomial", current, family="invmaj", params={"n": n}, about_mean=True
    )


def central_moments(n: int, r_max: int) -> MomentVector:
    """Exact central moments E[(X-mu)^r] from the binomial moments."""
    return binomial_to_raw(binomial_moments(n, r_max))


def maj_table(n: int) -> list[Polynomial]:
    """[F(n,1), ..., F(n,n)]: maj generating functions by final entry.

    F(n,i) = sum_{j<i} F(n-1,j) + q^{n-1} sum_{j>=i} F(n-1,j), F(1,1) = 1.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    row = [Polynomial("q", (1,))]
    for m in range(2, n + 1):
        prefix = [Polynomial("q", ())]
        for f in row:
            prefix.append(prefix[-1] + f)
        qpow = Polynomial("q", (0,) * (m - 1) + (1,))
        row = [prefix[i - 1] + qpow * (prefix[m - 1] - prefix[i - 1]) for i in range(1, m + 1)]
    return row


def maj_generating_function(n: int) -> Polynomial:
    """H_n(q) = sum over S_n of q^maj = F(n+1, n+1)."""
    return maj_table(n + 1)[-1]


def maj_pgf(n: int) -> Polynomial:
    return maj_generating_function(n) * Fraction(1, math.factorial(n))


def mgf_deviation(n: int, t_values, dps: int = 50):
    """max |G_n(e^{t/sigma}) - e^{t^2/2}| over the t grid.

    G_n(e^{t/sigma}) = (1/n!) prod_i sinh(i u)/sinh(u) with u = t/(2 sigma).
    Returns (sup, rows) where rows pair each t with its deviation.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    _, var = mean_variance(n)
    rows = []
    sup = mpmath.mpf(0)
    with mpmath.workdps(max(dps, 50)):
        sigma = mpmath.sqrt(mpmath.mpf(var.numerator) / var.denominator)
        logfact = sum(mpmath.log(mpmath.mpf(i)) for i in range(2, n + 1))
        for t in t_values:
            tt = mpmath.mpmathify(t)
            target = mpmath.e ** (tt * tt / 2)
            if tt == 0:
                phi = mpmath.mpf(1)
            else:
                u = tt / (2 * sigma)
                logphi = -logfact - n * mpmath.log(mpmath.sinh(u))
                for i in range(1, n + 1):
                    logphi += mpmath.log(mpmath.sinh(i * u))
                phi = mpmath.e**logphi
            dev = abs(phi - target)
            rows.append((tt, dev))
            sup = max(sup, dev)
    return sup, rows
