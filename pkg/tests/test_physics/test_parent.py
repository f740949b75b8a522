"""
Tests for the parent Hamiltonian and its number-conserving part
"""
import math

import numpy as np
import pytest

from rabi_asym.core.errors import DomainError, TruncationError, WrongCaseError
from rabi_asym.models import ModelParams
from rabi_asym.physics.fock import build_basis
from rabi_asym.physics.parent import (
    FChoice,
    build_vprime,
    f_tilde_diag,
    f_tilde_geometric,
    f_tilde_matrix,
    first_order_shifts,
    headroom,
    parent_eigensystem,
    parent_hamiltonian,
    special_constant,
    verify_shifted_genfunc,
    vprime_block,
    w_factor,
)

CASES = [(M, g) for M in (1, 2) for g in (0.5, 1.0, 2.0)]


def _params(M: int, g: float, delta: float = 0.3) -> ModelParams:
    return ModelParams(g=g, epsilon=M / 2.0, delta=delta)


class TestHelpers:
    """Tests for w_factor, special_constant and headroom"""

    def test_w_factor(self):
        assert w_factor(3, 1) == pytest.approx(math.sqrt(3.0))
        assert w_factor(4, 2) == pytest.approx(math.sqrt(12.0))
        assert w_factor(5, 0) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            w_factor(1, 2)

    def test_special_constant(self):
        assert special_constant(_params(1, 1.0)) == pytest.approx(-0.3)
        assert special_constant(_params(2, 0.5)) == pytest.approx(1.2)
        with pytest.raises(DomainError):
            special_constant(_params(1, 0.0))

    def test_requires_integer_case(self):
        with pytest.raises(WrongCaseError):
            special_constant(ModelParams(g=1.0, epsilon=0.25, delta=0.3))

    def test_headroom(self):
        assert headroom(_params(1, 1.0), build_basis(100)) == 89
        assert headroom(_params(2, 2.0), build_basis(100)) == 58

    def test_f_values(self):
        p = _params(1, 1.0)
        m = np.arange(4)
        np.testing.assert_allclose(FChoice.special().values(m, p), -0.3)
        np.testing.assert_allclose(FChoice.geometric(2.0, 0.5).values(m, p), [2.0, 1.0, 0.5, 0.25])
        np.testing.assert_array_equal(FChoice.zero().values(m, p), 0.0)


class TestParentMatrix:
    """Tests for the matrix of H'"""

    def test_symmetric(self):
        p = _params(2, 1.0)
        b = build_basis(40)
        H = parent_hamiltonian(p, FChoice.special(), b)
        np.testing.assert_allclose(H, H.T, atol=1e-14)

    def test_coupling_is_off_diagonal(self):
        p = _params(1, 1.0)
        b = build_basis(30)
        V = build_vprime(p, FChoice.special(), b)
        assert np.all(V[: b.levels, : b.levels] == 0.0)
        assert np.all(V[b.levels:, b.levels:] == 0.0)

    def test_no_headroom(self):
        with pytest.raises(TruncationError):
            parent_eigensystem(_params(1, 1.0), FChoice.special(), build_basis(5))


class TestEigenpairs:
    """Analytic eigenpairs of H' against the truncated matrix"""

    @pytest.mark.parametrize("M,g", CASES)
    def test_special_choice(self, M, g):
        p = _params(M, g)
        pairs = parent_eigensystem(p, FChoice.special(), build_basis(150), n_limit=10)
        assert len(pairs) == 2 * 11 - M
        for pair in pairs:
            assert pair.residual < 1e-8
        first = next(pair for pair in pairs if pair.label.n == M and pair.label.branch == 1)
        assert first.v_prime == pytest.approx(w_factor(M, M) * special_constant(p))

    def test_states_below_M_are_unshifted(self):
        p = _params(2, 1.0)
        pairs = parent_eigensystem(p, FChoice.special(), build_basis(100), n_limit=3)
        low = [pair for pair in pairs if pair.label.n < 2]
        assert [pair.energy for pair in low] == pytest.approx([-1.0, 0.0])
        assert all(pair.v_prime == 0.0 for pair in low)

    def test_special_choice_fixes_shifted_diagonal_only(self):
        p = _params(1, 1.0)
        b = build_basis(120)
        f = FChoice.special()
        literal = np.diag(vprime_block(p, f, b))[:5]
        shifted = [f_tilde_matrix(n, p, f, b) for n in range(5)]
        np.testing.assert_allclose(shifted, 0.3, atol=1e-9)
        assert not np.allclose(literal, 0.3, atol=1e-3)

    def test_zero_choice(self):
        p = _params(1, 1.0)
        pairs = parent_eigensystem(p, FChoice.zero(), build_basis(100), n_limit=6)
        for pair in pairs:
            assert pair.energy == pytest.approx(pair.label.n - 0.5)
            assert pair.residual < 1e-8

    def test_level_splittings_choice(self):
        p = _params(1, 1.0)
        f = FChoice.level_splittings([0.0, 0.1, 0.2, 0.3])
        pairs = {str(pair.label): pair for pair in parent_eigensystem(p, f, build_basis(100), n_limit=5)}
        assert pairs["2;+"].v_prime == pytest.approx(0.2)
        assert pairs["2;-"].v_prime == pytest.approx(-0.2)
        assert pairs["3;+"].v_prime == pytest.approx(0.3)
        assert pairs["5;+"].v_prime == 0.0
        assert max(pair.residual for pair in pairs.values()) < 1e-8

    def test_first_order_shifts(self):
        p = _params(1, 1.0)
        shifts = first_order_shifts(p, build_basis(100), n_limit=8)
        assert len(shifts) == 16
        for _, shift, reference in shifts:
            assert shift == pytest.approx(reference, abs=1e-10)


class TestNumberConservingPart:
    """Tests for f~(n)"""

    @pytest.mark.parametrize("M,g", CASES)
    def test_special_choice_gives_delta(self, M, g):
        p = _params(M, g)
        for n in range(21):
            assert f_tilde_diag(n, p, FChoice.special()) == pytest.approx(0.3, abs=1e-8)

    @pytest.mark.parametrize("s", [0.5, 0.9, -0.4])
    def test_geometric_closed_form(self, s):
        p = _params(2, 1.0)
        f = FChoice.geometric(special_constant(p), s)
        for n in range(8):
            assert f_tilde_diag(n, p, f) == pytest.approx(f_tilde_geometric(n, p, s), abs=1e-9)

    def test_geometric_unit_ratio(self):
        p = _params(1, 1.5)
        assert f_tilde_geometric(4, p, 1.0) == pytest.approx(0.3)
        with pytest.raises(DomainError):
            f_tilde_geometric(4, p, 0.0)

    def test_matrix_element_matches_series(self):
        p = _params(1, 1.0)
        b = build_basis(120)
        for f in (FChoice.special(), FChoice.geometric(special_constant(p), 0.5)):
            for n in range(6):
                assert f_tilde_matrix(n, p, f, b) == pytest.approx(f_tilde_diag(n, p, f), abs=1e-9)

    def test_zero_choice(self):
        assert f_tilde_diag(3, _params(1, 1.0), FChoice.zero()) == 0.0

    def test_fixed_cutoff(self):
        p = _params(1, 1.0)
        assert f_tilde_diag(2, p, FChoice.special(), series_cutoff=200) == pytest.approx(0.3, abs=1e-10)


class TestShiftedGeneratingFunction:
    """Tests for verify_shifted_genfunc"""

    @pytest.mark.parametrize("n,M,x,s", [
        (2, 1, 1.0, 0.5),
        (3, 2, 0.8, 0.9),
        (0, 1, 1.5, 0.3),
        (4, 1, 1.2, 1.0),
        (1, 1, 1.0, -0.5),
        (0, 0, 1.1, 0.5),
        (3, 0, 0.8, 0.7),
        (6, 0, 1.6, 0.3),
    ])
    def test_identity(self, n, M, x, s):
        assert verify_shifted_genfunc(n, M, x, s) < 1e-9

    @pytest.mark.parametrize("s", [0.0, 1.5, -2.0])
    def test_domain(self, s):
        with pytest.raises(DomainError):
            verify_shifted_genfunc(1, 1, 1.0, s)
