import math
from fractions import Fraction as Fr

import pytest

from momentforge.families import boolean
from momentforge.families.common import eval_at_n, w_to_big_w
from momentforge.moment_algebra import raw_to_central
from momentforge.oracle import enumerate_boolean, histogram_moments
from momentforge.poly_series import Polynomial

W = Polynomial.variable("W")
N = Polynomial.variable("n")
w = Polynomial.variable("w")


class TestZeroCube:
    def test_raw_moments_printed(self):
        assert boolean.raw_moment_k0(0) == 1
        assert boolean.raw_moment_k0(1) == W / 2
        assert boolean.raw_moment_k0(2) == W * (W + 1) / 4
        assert boolean.raw_moment_k0(3) == W * W * (W + 3) / 8
        assert boolean.raw_moment_k0(4) == W * (W * W + 5 * W - 2) * (W + 1) / 16

    def test_raw_moment_small_case(self):
        # n=1: X ~ Binomial(2, 1/2), E[X^2] = 3/2
        assert eval_at_n(boolean.raw_moment_k0(2), 1) == Fr(3, 2)

    def test_central_moments_printed(self):
        cm = boolean.central_moments_k0(8)
        assert cm.entries[2] == W / 4
        assert cm.entries[4] == (3 * W - 2) * W / 16
        assert cm.entries[6] == W * (15 * W * W - 30 * W + 16) / 64
        assert cm.entries[8] == W * (105 * W**3 - 420 * W * W + 588 * W - 272) / 256
        assert all(cm.entries[r].is_zero() for r in (1, 3, 5, 7))

    def test_against_oracle(self):
        for n in range(1, 5):
            mv = histogram_moments(enumerate_boolean(n, 0), 8)
            central = raw_to_central(mv, mv.entries[1])
            for r in range(9):
                assert eval_at_n(boolean.raw_moment_k0(r), n) == mv.entries[r], (n, r)
                assert eval_at_n(boolean.central_moments_k0(8).entries[r], n) == central.entries[r]

    def test_p_series_printed_in_2n(self):
        ps = boolean.p_series_k0(5)
        as_W = [w_to_big_w(c) if isinstance(c, Polynomial) else c for c in ps.coeffs]
        assert as_W[0] == 1 and as_W[1] == 0
        assert as_W[2] == W / 16
        assert as_W[3] == -W / 16
        assert as_W[4] == W * W / 512 + 7 * W / 128
        assert as_W[5] == -(W * W / 256 + 3 * W / 64)

    def test_binomial_moments_recurrence_and_leading_terms(self):
        bm = boolean.binomial_moments_k0(8)
        assert bm.entries[0] == 1 and bm.entries[1].is_zero()
        assert bm.entries[2] == w / 4  # = 2^n/8 = Var/2
        for r in (1, 2, 3, 4):
            deg, coef = bm.entries[2 * r].leading_term()
            assert (deg, coef) == (r, Fr(1, 4**r * math.factorial(r))), r
        for r in (1, 2, 3):
            # B_{2r+1} = -2^{rn}/((r-1)! 8^r) + ... = -w^r/((r-1)! 4^r) + ...
            deg, coef = bm.entries[2 * r + 1].leading_term()
            assert (deg, coef) == (r, Fr(-1, 4**r * math.factorial(r - 1))), r

    def test_binomial_recurrence_consistency(self):
        # G_n(1+z) coefficients = P(n,z) * G_{n-1}(1+z) with w -> w/2 rebasing
        r_max = 6
        bm = boolean.binomial_moments_k0(r_max)
        p = boolean.p_series_k0(r_max)
        half_w = Polynomial("w", (0, Fr(1, 2)))
        prev = [
            e.compose(half_w) if isinstance(e, Polynomial) else e for e in bm.entries
        ]
        for r in range(r_max + 1):
            acc = Polynomial("w", ())
            for s in range(r + 1):
                acc = acc + p.coefficient(s) * prev[r - s]
            assert acc == bm.entries[r], r

    def test_binomial_vs_oracle(self):
        from momentforge.moment_algebra import binomial_to_raw

        for n in range(1, 5):
            bm = boolean.binomial_moments_k0(6)
            numeric = [eval_at_n(e, n) for e in bm.entries]
            from momentforge.moment_algebra import MomentVector

            central = binomial_to_raw(
                MomentVector("binomial", numeric, about_mean=True)
            )
            mv = histogram_moments(enumerate_boolean(n, 0), 6)
            expect = raw_to_central(mv, mv.entries[1])
            assert tuple(central.entries) == tuple(expect.entries), n


class TestIdentities:
    def test_examples(self):
        assert boolean.central_coefficient(2, 1) == Fr(1, 4)
        assert boolean.central_coefficient(4, 2) == Fr(3, 16)
        assert boolean.central_coefficient(2, 0) == 0

    def test_battery(self):
        for r in range(11):
            for t in range(r + 1):
                v = boolean.central_coefficient(r, t)
                if r % 2 == 1 or t < r // 2:
                    assert v == 0, (r, t)
                elif t == r // 2:
                    k = r // 2
                    assert v == Fr(math.factorial(2 * k), 8**k * math.factorial(k))

    def test_coefficients_rebuild_central_moments(self):
        # sum_t coeff(r, t) W^(r-t) equals the central moment polynomial
        cm = boolean.central_moments_k0(8)
        for r in range(9):
            rebuilt = Polynomial("W", ())
            for t in range(r + 1):
                rebuilt = rebuilt + boolean.central_coefficient(r, t) * W ** (r - t)
            assert rebuilt == cm.entries[r], r


class TestGeneralK:
    def test_first_moment(self):
        assert boolean.first_moment_k(0) == Polynomial("W", (0, Fr(1, 2)))
        assert boolean.first_moment_k(1) == Polynomial("W", (0, N / 8))
        assert eval_at_n(boolean.first_moment_k(1), 1) == Fr(1, 4)

    def test_second_moments_printed(self):
        assert boolean.second_moment_k(1) == Polynomial(
            "W", (0, N * (4 * N + 2) / 64, N * N / 64)
        )
        d2 = Fr(2**14)
        assert boolean.second_moment_k(2) == Polynomial(
            "W",
            (0, 8 * N * (N - 1) * (2 * N * N + 2 * N + 3) / d2, (N * (N - 1)) ** 2 / d2),
        )
        d3 = Fr(2**24 * 9)
        f3 = N * (N - 1) * (N - 2)
        assert boolean.second_moment_k(3) == Polynomial(
            "W", (0, 16 * f3 * (4 * N**3 + 6 * N * N + 80 * N + 363) / d3, f3 * f3 / d3)
        )

    def test_variances_printed(self):
        assert boolean.variance_k(0) == Polynomial("W", (0, Fr(1, 4)))
        assert boolean.variance_k(1) == Polynomial("W", (0, N * (2 * N + 1) / 32))
        assert boolean.variance_k(2) == Polynomial(
            "W", (0, N * (N - 1) * (2 * N * N + 2 * N + 3) / Fr(2**11))
        )

    def test_variance_leading_term(self):
        # L{Var} = n^{2k} 2^n / (k!^2 2^{2^{k+1}})
        for k in range(4):
            coef = boolean.variance_k(k).coefficient(1)
            deg, lead = (0, coef) if isinstance(coef, Fr) else coef.leading_term()
            assert deg == 2 * k
            assert lead == Fr(1, math.factorial(k) ** 2 * 2 ** (2 ** (k + 1)))

    def test_second_moment_k0_consistent(self):
        assert boolean.second_moment_k(0) == boolean.raw_moment_k0(2)

    def test_against_oracle(self):
        for k in (1, 2):
            for n in range(k, 5):
                mv = histogram_moments(enumerate_boolean(n, k), 2)
                central = raw_to_central(mv, mv.entries[1])
                assert eval_at_n(boolean.first_moment_k(k), n) == mv.entries[1]
                assert eval_at_n(boolean.second_moment_k(k), n) == mv.entries[2]
                assert eval_at_n(boolean.variance_k(k), n) == central.entries[2]

    def test_third_moment_k1(self):
        got = boolean.third_moment_k1()
        scale = Fr(1, 512)
        assert got == Polynomial(
            "W",
            (0, 24 * N**3 * scale, 6 * N * N * (2 * N + 1) * scale, N**3 * scale),
        )
        assert eval_at_n(got, 2) == Fr(25, 4)
        for n in range(1, 5):
            mv = histogram_moments(enumerate_boolean(n, 1), 3)
            assert eval_at_n(got, n) == mv.entries[3], n

    def test_central_third_k1(self):
        cm = boolean.central_moments_k1(3)
        assert cm.entries[3] == Polynomial("W", (0, 3 * N**3 / 64))
        for n in range(1, 5):
            mv = histogram_moments(enumerate_boolean(n, 1), 3)
            central = raw_to_central(mv, mv.entries[1])
            assert eval_at_n(cm.entries[3], n) == central.entries[3], n

    def test_out_of_scope_orders_rejected(self):
        with pytest.raises(ValueError):
            boolean.raw_moments_k1(4)
        with pytest.raises(ValueError):
            boolean.central_moments_k1(5)


class TestHApproximation:
    def test_probability(self):
        assert boolean.h_probability(4, 0) == 1
        assert boolean.h_probability(4, 1) == Fr(4, 16)
        assert boolean.h_probability(5, 1) == Fr(5, 32)

    def test_printed_mean_lines(self):
        for n in range(1, 10):
            assert boolean.h_moments(n, 0)["mean"] == Fr(2 ** (n - 1))
        for n in range(1, 10):
            assert boolean.h_moments(n, 1)["mean"] == Fr(n * (2**n - 1), 8)
        for n in range(2, 10):
            expected = (
                Fr(n * (n - 1), 2)
                * (Fr(2**n) - 6 + Fr(11, 2**n) - Fr(6, 2 ** (2 * n)))
                / 64
            )
            assert boolean.h_moments(n, 2)["mean"] == expected

    def test_closed_form_matches_sum(self):
        for k in (0, 1, 2):
            for n in range(max(k, 1), 9):
                assert boolean.h_mean_closed_form(n, k) == boolean.h_moments(n, k)["mean"]

    def test_k0_variance(self):
        for n in range(1, 8):
            assert boolean.h_moments(n, 0)["variance"] == Fr(2**n, 4)

    def test_polynomial_small(self):
        # k=0: H_n(q) is the exact PGF ((1+q)/2)^(2^n)
        h = boolean.h_polynomial(2, 0)
        base = Polynomial("q", (Fr(1, 2), Fr(1, 2)))
        assert h == base**4
        # moments derived from the polynomial agree with the sum route
        h1 = boolean.h_polynomial(3, 1)
        d1 = h1.derivative()
        assert d1.eval(1) == boolean.h_moments(3, 1)["mean"]
        d2 = d1.derivative()
        assert d2.eval(1) == boolean.h_moments(3, 1)["second_factorial"]

    def test_guards(self):
        from momentforge.errors import SizeGuardError

        with pytest.raises(SizeGuardError):
            boolean.h_moments(15, 1)
        with pytest.raises(SizeGuardError):
            boolean.h_polynomial(10, 1)
