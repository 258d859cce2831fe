import json
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentforge.moment_algebra import (
    MomentVector,
    binomial_to_raw,
    central_to_raw,
    gaussian_moment,
    normality_report,
    normalized_moments,
    raw_to_binomial,
    raw_to_central,
)
from momentforge.poly_series import Polynomial


def test_kind_validation():
    with pytest.raises(ValueError):
        MomentVector("raw", [Fr(2)])
    with pytest.raises(ValueError):
        MomentVector("central", [Fr(1), Fr(1)])
    with pytest.raises(ValueError):
        MomentVector("nope", [Fr(1)])
    MomentVector("binomial", [Fr(1), Fr(3)])  # not about the mean: entry 1 free


def test_binomial_to_raw_examples():
    var = Fr(11, 12)
    b = MomentVector("binomial", [Fr(1), Fr(0), var / 2], about_mean=True)
    m = binomial_to_raw(b)
    assert m.kind == "central"
    assert m.entries[2] == var
    b0 = MomentVector("binomial", [Fr(1)])
    assert binomial_to_raw(b0).entries[0] == 1


def test_raw_to_central_examples():
    W = Polynomial.variable("W")
    raws = MomentVector("raw", [Polynomial("W", (1,)), W / 2, W * (W + 1) / 4])
    central = raw_to_central(raws, W / 2)
    assert central.entries[1] == 0
    assert central.entries[2] == W / 4  # Var of the 0-cube count is 2^(n-2)

    point = MomentVector("raw", [Fr(1), Fr(7), Fr(49), Fr(343)])
    c = raw_to_central(point, Fr(7))
    assert c.entries[1] == 0 and c.entries[2] == 0 and c.entries[3] == 0


def test_raw_to_central_rejects_wrong_mean():
    m = MomentVector("raw", [Fr(1), Fr(3), Fr(10)])
    with pytest.raises(ValueError):
        raw_to_central(m, Fr(2))


def test_gaussian_moments():
    assert gaussian_moment(0) == 1
    assert gaussian_moment(2) == 1
    assert gaussian_moment(4) == 3
    assert gaussian_moment(6) == 15
    assert gaussian_moment(7) == 0
    assert gaussian_moment(2 * 5) == Fr(3628800, 2**5 * 120)


def test_normalized_moments():
    # Gaussian-shaped central moments scaled by sigma^r stay on target
    var = Fr(9, 4)
    central = MomentVector(
        "central",
        [gaussian_moment(r) * var ** Fr(r, 2) if r % 2 == 0 else Fr(0) for r in range(7)],
    )
    ms = normalized_moments(central)
    assert ms[2] == 1 and abs(ms[4] - 3) < 1e-40 and ms[3] == 0

    with pytest.raises(ValueError):
        normalized_moments(MomentVector("central", [Fr(1), Fr(0), Fr(0)]))


def test_normalized_moment_board_example():
    # 1xn board at mu = 50: m_4 = (3 mu - 1)/mu = 2.98
    import mpmath

    mu = Fr(50)
    central = MomentVector("central", [Fr(1), Fr(0), mu / 2, Fr(0), mu * (3 * mu - 1) / 4])
    ms = normalized_moments(central)
    with mpmath.workdps(50):
        assert abs(ms[4] - mpmath.mpf(149) / 50) < mpmath.mpf("1e-45")


def test_roundtrips():
    m = MomentVector("raw", [Fr(1), Fr(3), Fr(11), Fr(45), Fr(200), Fr(950)])
    assert binomial_to_raw(raw_to_binomial(m)).entries == m.entries
    c = raw_to_central(m, Fr(3))
    assert central_to_raw(c, Fr(3)).entries == m.entries


@settings(derandomize=True, max_examples=50)
@given(st.lists(st.fractions(min_value=Fr(-50), max_value=Fr(50), max_denominator=20),
                min_size=3, max_size=12))
def test_binomial_raw_roundtrip_random(tail):
    m = MomentVector("raw", [Fr(1)] + tail)
    b = raw_to_binomial(m)
    assert binomial_to_raw(b).entries == m.entries


def test_normality_report_board():
    # deviations at r=4 are exactly 1/mu for the 1-by-n board
    def central_at(n):
        mu = Fr(n - 1, 2)
        return MomentVector(
            "central", [Fr(1), Fr(0), mu / 2, Fr(0), mu * (3 * mu - 1) / 4]
        )

    grid = [(11, central_at(11)), (101, central_at(101)), (1001, central_at(1001))]
    rep = normality_report("domino", {"m": 1}, grid, 4)
    assert rep.verdicts[4] is True and rep.verdicts[3] is True
    devs = [row.deviation for row in rep.rows if row.r == 4]
    assert [float(d) for d in devs] == [0.2, 0.02, 0.002]

    data = rep.to_json_dict()
    json.dumps(data)
    assert data["verdicts"]["4"] is True
    csv_text = rep.to_csv_text()
    assert csv_text.splitlines()[0] == "family,params,r,n,m_r,target,deviation,verdict"


def test_normality_report_needs_three_points():
    central = MomentVector("central", [Fr(1), Fr(0), Fr(1), Fr(0), Fr(3)])
    with pytest.raises(ValueError):
        normality_report("x", {}, [(1, central), (2, central)], 4)
