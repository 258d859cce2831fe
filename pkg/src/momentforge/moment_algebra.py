"""Conversions among raw, central, and binomial moments, and normality reports.

The binomial moment of order r is E[C(X - center, r)]; converting to power
moments uses Stirling numbers of the second kind, the inverse direction the
signed first kind.  Gaussian targets are (2s)!/(2^s s!) for even order 2s
and 0 for odd order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from momentforge.exact_core import binomial, stirling1_signed, stirling2
from momentforge.poly_series import Polynomial

__all__ = [
    "MomentVector",
    "NormalityReport",
    "binomial_to_raw",
    "raw_to_binomial",
    "raw_to_central",
    "central_to_raw",
    "gaussian_moment",
    "normalized_moments",
    "normality_report",
]

KINDS = ("raw", "central", "binomial")


def _is_one(v) -> bool:
    return v == Fraction(1) or (isinstance(v, Polynomial) and v == 1)


def _is_zero(v) -> bool:
    return v == 0 if not isinstance(v, Polynomial) else v.is_zero()


@dataclass(frozen=True)
class MomentVector:
    """Exact moments indexed 0..r_max with family metadata.

    ``kind`` is one of raw / central / binomial; ``about_mean`` records the
    centering (it is implied True for central, False for raw).  Entries are
    Fractions or Polynomials.
    """

    kind: str
    entries: tuple
    family: str | None = None
    params: Mapping | None = None
    about_mean: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown moment kind {self.kind!r}")
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.kind == "central":
            object.__setattr__(self, "about_mean", True)
        if self.kind == "raw" and self.about_mean:
            raise ValueError("raw moments are about the origin; use kind='central'")
        if self.entries and not _is_one(self.entries[0]):
            raise ValueError(f"moment of order 0 must be 1, got {self.entries[0]!r}")
        centered = self.kind == "central" or (self.kind == "binomial" and self.about_mean)
        if centered and len(self.entries) > 1 and not _is_zero(self.entries[1]):
            raise ValueError(
                f"order-1 entry of a mean-centered vector must be 0, got {self.entries[1]!r}"
            )

    @property
    def r_max(self) -> int:
        return len(self.entries) - 1

    def entry(self, r: int):
        return self.entries[r]

    def map_entries(self, fn) -> "MomentVector":
        return MomentVector(
            self.kind, tuple(fn(e) for e in self.entries), self.family, self.params, self.about_mean
        )


def binomial_to_raw(vec: MomentVector) -> MomentVector:
    """Power moments from binomial moments: M_r = sum_i {r brace i} B_i i!.

    The result is about the same center as the input, so a mean-centered
    binomial vector converts to central power moments.
    """
    if vec.kind != "binomial":
        raise ValueError("binomial_to_raw expects a binomial MomentVector")
    out = []
    for r in range(vec.r_max + 1):
        acc = Fraction(0)
        for i in range(r + 1):
            acc = acc + Fraction(stirling2(r, i) * math.factorial(i)) * vec.entries[i]
        out.append(acc)
    kind = "central" if vec.about_mean else "raw"
    return MomentVector(kind, out, vec.family, vec.params, vec.about_mean)


def raw_to_binomial(vec: MomentVector) -> MomentVector:
    """Inverse of :func:`binomial_to_raw` via signed Stirling numbers."""
    if vec.kind == "binomial":
        raise ValueError("raw_to_binomial expects power moments")
    out = []
    for r in range(vec.r_max + 1):
        acc = Fraction(0)
        for k in range(r + 1):
            acc = acc + Fraction(stirling1_signed(r, k)) * vec.entries[k]
        out.append(acc * Fraction(1, math.factorial(r)))
    return MomentVector(
        "binomial", out, vec.family, vec.params, about_mean=(vec.kind == "central")
    )


def raw_to_central(vec: MomentVector, mu) -> MomentVector:
    """Moments about the mean via the binomial transform.

    ``mu`` must equal the first raw moment; the order-1 central entry comes
    out exactly 0.
    """
    if vec.kind != "raw":
        raise ValueError("raw_to_central expects raw moments")
    if vec.r_max < 1 or not vec.entries[1] == mu:
        raise ValueError(f"mu={mu!r} does not match first raw moment {vec.entries[1]!r}")
    out = []
    for r in range(vec.r_max + 1):
        acc = Fraction(0)
        for i in range(r + 1):
            sign = Fraction(-1) ** (r - i)
            acc = acc + sign * binomial(r, i) * vec.entries[i] * mu ** (r - i)
        out.append(acc)
    return MomentVector("central", out, vec.family, vec.params, about_mean=True)


def central_to_raw(vec: MomentVector, mu) -> MomentVector:
    """Inverse of :func:`raw_to_central`: E[X^r] = sum_i C(r,i) central_i mu^{r-i}."""
    if vec.kind != "central":
        raise ValueError("central_to_raw expects central moments")
    out = []
    for r in range(vec.r_max + 1):
        acc = Fraction(0)
        for i in range(r + 1):
            acc = acc + binomial(r, i) * vec.entries[i] * mu ** (r - i)
        out.append(acc)
    return MomentVector("raw", out, vec.family, vec.params, about_mean=False)


def gaussian_moment(r: int) -> Fraction:
    """Standard-normal moment of order r: (2s)!/(2^s s!) for r=2s, 0 odd."""
    if r < 0:
        raise ValueError("moment order must be >= 0")
    if r % 2:
        return Fraction(0)
    s = r // 2
    return Fraction(math.factorial(2 * s), 2**s * math.factorial(s))


def normalized_moments(vec: MomentVector, dps: int = 50) -> list[mpmath.mpf]:
    """m_r = central_r / central_2^{r/2} as high-precision reals.

    Even orders are computed exactly and then converted; odd orders use an
    arbitrary-precision square root at ``dps`` significant digits (>= 50 by
    contract).
    """
    if vec.kind != "central":
        raise ValueError("normalized_moments expects central moments")
    if vec.r_max < 2:
        raise ValueError("need central moments through order 2")
    var = vec.entries[2]
    if not isinstance(var, Fraction):
        raise ValueError("normalized moments need numeric central moments")
    if var <= 0:
        raise ValueError("zero variance: normalized moments undefined")
    dps = max(dps, 50)
    out = []
    with mpmath.workdps(dps):
        sigma = mpmath.sqrt(mpmath.mpf(var.numerator) / var.denominator)
        for r in range(vec.r_max + 1):
            c = vec.entries[r]
            if r % 2 == 0:
                exact = c / var ** (r // 2)
                out.append(mpmath.mpf(exact.numerator) / exact.denominator)
            else:
                base = c / var ** ((r - 1) // 2)
                out.append(mpmath.mpf(base.numerator) / base.denominator / sigma)
    return out


@dataclass(frozen=True)
class NormalityRow:
    r: int
    n: int
    m_r: str
    target: str
    deviation: str


@dataclass(frozen=True)
class NormalityReport:
    """Per-(r, n) normalized moments against Gaussian targets.

    The verdict for order r is True when the deviation at the largest grid
    point is below the threshold and the deviations are non-increasing over
    the last three grid points.
    """

    family: str
    params: Mapping
    threshold: float
    dps: int
    rows: tuple[NormalityRow, ...]
    verdicts: Mapping[int, bool] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "threshold": self.threshold,
            "precision_digits": self.dps,
            "rows": [
                {
                    "r": row.r,
                    "n": row.n,
                    "m_r": row.m_r,
                    "target": row.target,
                    "deviation": row.deviation,
                }
                for row in self.rows
            ],
            "verdicts": {str(r): ok for r, ok in sorted(self.verdicts.items())},
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["family", "params", "r", "n", "m_r", "target", "deviation", "verdict"])
        params_text = ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        for row in self.rows:
            writer.writerow(
                [
                    self.family,
                    params_text,
                    row.r,
                    row.n,
                    row.m_r,
                    row.target,
                    row.deviation,
                    self.verdicts[row.r],
                ]
            )
        return buf.getvalue()


def normality_report(
    family: str,
    params: Mapping,
    grid: Sequence[tuple[int, MomentVector]],
    r_max: int,
    threshold: float = 0.05,
    dps: int = 50,
) -> NormalityReport:
    """Tabulate |m_r - gaussian target| over an n-grid and flag convergence.

    ``grid`` supplies exact central moments for each n, ascending; at least
    3 grid points are required.
    """
    if len(grid) < 3:
        raise ValueError("normality report needs a grid of at least 3 points")
    ns = [n for n, _ in grid]
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise ValueError("grid points must be strictly increasing in n")
    rows: list[NormalityRow] = []
    devs: dict[int, list[mpmath.mpf]] = {r: [] for r in range(r_max + 1)}
    with mpmath.workdps(max(dps, 50)):
        for n, vec in grid:
            if vec.r_max < r_max:
                raise ValueError(f"grid point n={n} lacks moments up to {r_max}")
            ms = normalized_moments(vec, dps=dps)
            for r in range(r_max + 1):
                target = gaussian_moment(r)
                tval = mpmath.mpf(target.numerator) / target.denominator
                dev = abs(ms[r] - tval)
                devs[r].append(dev)
                rows.append(
                    NormalityRow(
                        r=r,
                        n=n,
                        m_r=mpmath.nstr(ms[r], 17),
                        target=str(target),
                        deviation=mpmath.nstr(dev, 17),
                    )
                )
        verdicts = {}
        for r in range(r_max + 1):
            d = devs[r]
            tail_ok = d[-3] >= d[-2] >= d[-1]
            verdicts[r] = bool(d[-1] < threshold and tail_ok)
    return NormalityReport(
        family=family,
        params=params,
        threshold=threshold,
        dps=max(dps, 50),
        rows=tuple(rows),
        verdicts=verdicts,
    )
