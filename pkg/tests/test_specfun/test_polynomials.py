"""
Tests for gamma helpers, two-variable Hermite and Laguerre polynomials and the overlaps F
"""
import math

import numpy as np
import pytest
from scipy import linalg, special

from rabi_asym.core.errors import DomainError, PoleError
from rabi_asym.specfun.gamma import check_pole, gamma_suite, is_nonpositive_integer, log_rgamma, pole_distance
from rabi_asym.specfun.polynomials import (
    hermite2,
    hermite2_terms,
    laguerre,
    overlap_F,
    overlap_F_column,
    overlap_F_prime,
    overlap_F_squared_dx_row,
    overlap_F_squared_row,
)


class TestGamma:
    """Tests for the gamma suite and pole policy"""

    def test_half(self):
        v = gamma_suite(0.5)
        assert v.gamma == pytest.approx(math.sqrt(math.pi))
        assert v.ln_gamma == pytest.approx(0.5 * math.log(math.pi))
        assert v.digamma == pytest.approx(-np.euler_gamma - 2.0 * math.log(2.0))
        assert v.sign == 1.0

    def test_negative_noninteger(self):
        v = gamma_suite(-1.5)
        assert v.gamma == pytest.approx(4.0 * math.sqrt(math.pi) / 3.0)

    @pytest.mark.parametrize("x", [0.0, -1.0, -3.0 + 1e-10])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma_suite(x)

    def test_pole_distance(self):
        assert pole_distance(0.7) == pytest.approx(0.7)
        assert pole_distance(-2.3) == pytest.approx(0.3)
        assert pole_distance(-4.0) == 0.0

    def test_check_pole_custom_tolerance(self):
        check_pole(-1.01)
        with pytest.raises(PoleError):
            check_pole(-1.01, pole_tol=0.1)

    def test_nonpositive_integer(self):
        assert is_nonpositive_integer(0.0)
        assert is_nonpositive_integer(-5.0)
        assert not is_nonpositive_integer(-0.5)
        assert not is_nonpositive_integer(2.0)

    def test_log_rgamma_poles(self):
        log_abs, sign = log_rgamma(np.array([0.0, -1.0, 2.0, -0.5]))
        assert sign[0] == 0.0 and sign[1] == 0.0
        assert np.isneginf(log_abs[0])
        assert log_abs[2] == pytest.approx(0.0)
        assert sign[3] == -1.0


class TestHermite2:
    """Tests for H_{nm}(x, y)"""

    def test_low_orders(self):
        x, y = 0.7, -1.3
        assert hermite2(0, 0, x, y) == 1.0
        assert hermite2(1, 1, x, y) == pytest.approx(x * y - 1.0)
        assert hermite2(2, 1, x, y) == pytest.approx(x * x * y - 2.0 * x)

    @pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (3, 7), (4, 4)])
    def test_laguerre_relation(self, n, m):
        x = 0.9
        expected = (-1) ** n * math.factorial(n) * x ** (m - n) * laguerre(n, m - n, x * x)
        assert hermite2(n, m, x, x) == pytest.approx(expected, rel=1e-12)
        assert hermite2(m, n, x, x) == pytest.approx(expected, rel=1e-12)

    def test_log_space_route(self):
        x = 0.5
        expected = 2.0 * x ** 59 * laguerre(2, 59, x * x)
        assert hermite2(2, 61, x, x) == pytest.approx(expected, rel=1e-12)

    def test_generating_function(self):
        u, v, x, y = 0.3, 0.2, 1.1, 0.7
        total = math.fsum(
            u ** n * v ** m * hermite2(n, m, x, y) / (math.factorial(n) * math.factorial(m))
            for n in range(9)
            for m in range(9)
        )
        assert total == pytest.approx(math.exp(-u * v + u * x + v * y), abs=1e-10)

    @pytest.mark.parametrize("n", range(7))
    @pytest.mark.parametrize("s", [0.3, 0.7])
    @pytest.mark.parametrize("x", [0.8, 1.6])
    def test_squared_generating_function(self, n, s, x):
        X = x * x
        total = math.fsum(
            hermite2(n, m, x, x) ** 2 * s ** m / (math.factorial(n) * math.factorial(m))
            for m in range(80)
        )
        expected = math.exp(s * X) * s ** n * laguerre(n, 0, -X * (1.0 - s) ** 2 / s)
        assert total == pytest.approx(expected, rel=1e-9)

    def test_terms_count(self):
        assert len(hermite2_terms(3, 5, 1.0, 1.0)) == 4

    def test_negative_index(self):
        with pytest.raises(DomainError):
            hermite2(-1, 2, 1.0, 1.0)


class TestLaguerre:
    """Tests for associated Laguerre polynomials with integer alpha"""

    def test_matches_scipy(self):
        for n in range(6):
            for alpha in range(4):
                assert laguerre(n, alpha, 1.7) == pytest.approx(float(special.eval_genlaguerre(n, alpha, 1.7)))

    def test_explicit(self):
        x = 0.6
        assert laguerre(2, 1, x) == pytest.approx(x * x / 2.0 - 3.0 * x + 3.0)

    def test_negative_alpha_recurrence(self):
        x = 0.6
        assert laguerre(2, -1, x) == pytest.approx(x * x / 2.0 - x)
        assert laguerre(0, -3, x) == 1.0
        # L_n^(-k)(x) = (-x)^k (n-k)!/n! L_{n-k}^(k)(x)
        assert laguerre(4, -2, x) == pytest.approx(x * x * 2.0 / 24.0 * laguerre(2, 2, x))

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            laguerre(-1, 0, 1.0)


class TestOverlapF:
    """Tests for F_{n'n}(x) = <n'|U(x)|n>"""

    def test_vacuum(self):
        assert overlap_F(0, 0, 2.0) == pytest.approx(math.exp(-2.0))

    def test_first_row(self):
        x = 0.8
        assert overlap_F(1, 0, x) == pytest.approx(-x * math.exp(-x * x / 2.0))
        assert overlap_F(0, 1, x) == pytest.approx(x * math.exp(-x * x / 2.0))

    def test_zero_shift(self):
        assert overlap_F(3, 3, 0.0) == 1.0
        assert overlap_F(3, 2, 0.0) == 0.0

    def test_index_symmetry(self):
        x = 1.3
        for n in range(5):
            for m in range(5):
                assert overlap_F(n, m, x) == pytest.approx((-1) ** (n + m) * overlap_F(m, n, x), abs=1e-15)

    def test_matrix_elements_of_displacement(self):
        x = 1.3
        a = np.diag(np.sqrt(np.arange(1.0, 80.0)), k=1)
        U = linalg.expm(x * (a - a.T))
        for n_prime in range(6):
            for n in range(6):
                assert overlap_F(n_prime, n, x) == pytest.approx(U[n_prime, n], abs=1e-12)

    def test_rows_are_normalized(self):
        x = 1.5
        for n in range(4):
            total = math.fsum(overlap_F(n, m, x) ** 2 for m in range(120))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_rows(self):
        x = 1.1
        dot = math.fsum(overlap_F(m, 1, x) * overlap_F(m, 2, x) for m in range(120))
        assert dot == pytest.approx(0.0, abs=1e-12)

    def test_derivative(self):
        x, h = 1.2, 1e-5
        for n_prime, n in [(0, 0), (2, 1), (1, 3), (4, 4)]:
            fd = (overlap_F(n_prime, n, x + h) - overlap_F(n_prime, n, x - h)) / (2.0 * h)
            assert overlap_F_prime(n_prime, n, x) == pytest.approx(fd, abs=1e-8)

    def test_vectorized_rows(self):
        x, count = 1.4, 30
        row = overlap_F_squared_row(2, count, x)
        column = overlap_F_column(2, count, x)
        for m in range(count):
            assert row[m] == pytest.approx(overlap_F(2, m, x) ** 2, abs=1e-15)
            assert column[m] == pytest.approx(overlap_F(m, 2, x), abs=1e-15)

    def test_squared_row_derivative(self):
        x, h, count = 0.9, 1e-5, 25
        fd = (overlap_F_squared_row(3, count, x + h) - overlap_F_squared_row(3, count, x - h)) / (2.0 * h)
        np.testing.assert_allclose(overlap_F_squared_dx_row(3, count, x), fd, atol=1e-8)

    def test_negative_index(self):
        with pytest.raises(DomainError):
            overlap_F(0, -1, 1.0)
