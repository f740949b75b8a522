"""
Tests for the truncated basis, shifted states and Hamiltonian matrices
"""
import math

import numpy as np
import pytest

from rabi_asym.core.errors import DomainError, TruncationError
from rabi_asym.models import ModelParams, StateLabel
from rabi_asym.physics.fock import (
    build_basis,
    coherent_state,
    displacement_extended,
    displacement_operator,
    expectation,
    shifted_number_state,
    zeroth_order_state,
)
from rabi_asym.physics.hamiltonian import (
    build_arm_hamiltonian,
    build_rotated_hamiltonian,
    build_unperturbed_rotated,
    observable_matrix,
)
from rabi_asym.specfun.polynomials import overlap_F

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


class TestBasis:
    """Tests for TruncatedFockBasis"""

    def test_layout(self):
        b = build_basis(3)
        assert b.levels == 4
        assert b.dim == 8
        assert b.index(1, 2) == 6
        assert b.split(6) == (1, 2)

    def test_out_of_range(self):
        b = build_basis(3)
        with pytest.raises(DomainError):
            b.index(0, 4)
        with pytest.raises(DomainError):
            b.split(8)
        with pytest.raises(DomainError):
            build_basis(-1)

    def test_ladder_operators(self):
        b = build_basis(5)
        a = b.annihilation()
        np.testing.assert_allclose(a.T @ a, b.number(), atol=1e-14)


class TestShiftedStates:
    """Tests for displacement operators and |n>_sigma"""

    def test_displacement_identity_at_zero(self):
        np.testing.assert_array_equal(displacement_operator(0.0, build_basis(4)), np.eye(5))

    def test_displacement_orthogonal_columns(self):
        b = build_basis(60)
        U = displacement_operator(1.5, b)
        np.testing.assert_allclose(U[:, :20].T @ U[:, :20], np.eye(20), atol=1e-10)

    def test_vacuum_is_coherent(self):
        b = build_basis(60)
        p = ModelParams(g=1.2)
        np.testing.assert_allclose(shifted_number_state(0, 1, p, b), coherent_state(-1.2, b), atol=1e-12)
        np.testing.assert_allclose(shifted_number_state(0, -1, p, b), coherent_state(1.2, b), atol=1e-12)

    def test_number_eigenstate(self):
        b = build_basis(80)
        p = ModelParams(g=1.0)
        a = b.annihilation()
        for sigma in (1, -1):
            shifted = a + sigma * p.g_tilde * np.eye(b.levels)
            state = shifted_number_state(3, sigma, p, b)
            op = shifted.T @ shifted
            np.testing.assert_allclose(op[:70, :] @ state, 3.0 * state[:70], atol=1e-8)

    def test_tail_too_large(self):
        with pytest.raises(TruncationError):
            shifted_number_state(0, 1, ModelParams(g=3.0), build_basis(8))

    def test_level_outside_basis(self):
        with pytest.raises(TruncationError):
            shifted_number_state(12, 1, ModelParams(g=0.5), build_basis(10))

    def test_invalid_sigma(self):
        with pytest.raises(DomainError):
            shifted_number_state(0, 0, ModelParams(g=0.5), build_basis(10))

    @pytest.mark.parametrize("g", [0.5, 1.5, 3.0])
    def test_cross_overlaps_are_F(self, g):
        b = build_basis(120)
        p = ModelParams(g=g)
        plus = np.array([shifted_number_state(n, 1, p, b) for n in range(13)])
        minus = np.array([shifted_number_state(n, -1, p, b) for n in range(13)])
        overlaps = minus @ plus.T
        expected = np.array([[overlap_F(n_prime, n, 2.0 * p.g_tilde) for n in range(13)] for n_prime in range(13)])
        np.testing.assert_allclose(overlaps, expected, atol=1e-12)

    @pytest.mark.parametrize("g", [0.5, 1.5, 3.0])
    def test_double_shift_maps_minus_to_plus(self, g):
        b = build_basis(120)
        p = ModelParams(g=g)
        U = displacement_extended(2.0 * p.g_tilde, b.levels)
        for n in (0, 4, 12):
            padded = np.zeros(U.shape[0])
            padded[: b.levels] = shifted_number_state(n, -1, p, b)
            mapped = U @ padded
            np.testing.assert_allclose(mapped[: b.levels], shifted_number_state(n, 1, p, b), atol=1e-10)
            assert np.linalg.norm(mapped[b.levels:]) < 1e-10

    def test_padded_displacement_reused(self):
        first = displacement_extended(0.7, 20)
        assert displacement_extended(0.7, 20) is first
        assert not first.flags.writeable
        assert displacement_operator(0.7, build_basis(19)).flags.writeable

    def test_coherent_mean_number(self):
        b = build_basis(60)
        state = coherent_state(-1.5, b)
        assert np.linalg.norm(state) == pytest.approx(1.0)
        assert expectation(state, b.number()) == pytest.approx(2.25)


class TestHamiltonians:
    """Tests for lab and rotated frame matrices"""

    def test_symmetric(self):
        p = ModelParams(g=0.7, epsilon=0.25, delta=0.3)
        b = build_basis(20)
        for H in (build_arm_hamiltonian(p, b), build_rotated_hamiltonian(p, b)):
            np.testing.assert_array_equal(H, H.T)

    def test_zero_coupling_spectrum(self):
        p = ModelParams(g=0.0, epsilon=0.25, delta=0.3)
        values = np.linalg.eigvalsh(build_arm_hamiltonian(p, build_basis(10)))
        root = math.sqrt(0.25 ** 2 + 0.3 ** 2)
        assert values[0] == pytest.approx(-root)
        assert values[1] == pytest.approx(root)
        assert values[2] == pytest.approx(1.0 - root)

    def test_frames_differ_by_constant(self):
        p = ModelParams(omega=1.3, g=0.9, epsilon=0.4, delta=0.35)
        b = build_basis(30)
        lab = np.linalg.eigvalsh(build_arm_hamiltonian(p, b))
        rotated = np.linalg.eigvalsh(build_rotated_hamiltonian(p, b))
        np.testing.assert_allclose(rotated - p.frame_shift, lab, atol=1e-10)

    @pytest.mark.parametrize("which", ["sx", "sz", "number", "parity", "sy_magnitude_check"])
    def test_observables_follow_frame_change(self, which):
        b = build_basis(6)
        R = b.embed(HADAMARD, np.eye(b.levels))
        lab = observable_matrix(which, b, frame="lab")
        rotated = observable_matrix(which, b, frame="rotated")
        np.testing.assert_allclose(R @ lab @ R, rotated, atol=1e-14)

    def test_unknown_observable(self):
        with pytest.raises(DomainError):
            observable_matrix("sy", build_basis(2))
        with pytest.raises(DomainError):
            observable_matrix("sx", build_basis(2), frame="tilted")

    def test_parity_commutes_without_bias(self):
        p = ModelParams(g=0.8, epsilon=0.0, delta=0.3)
        b = build_basis(15)
        H = build_arm_hamiltonian(p, b)
        P = observable_matrix("parity", b)
        np.testing.assert_allclose(H @ P, P @ H, atol=1e-12)

    def test_sy_generator_vanishes_for_real_states(self):
        b = build_basis(5)
        rng = np.random.default_rng(3)
        state = rng.normal(size=b.dim)
        assert expectation(state, observable_matrix("sy_magnitude_check", b), magnitude=True) == pytest.approx(0.0, abs=1e-12)


class TestZerothOrderStates:
    """Tests for the unperturbed eigenstates of the rotated frame"""

    @pytest.mark.parametrize("label", [StateLabel(0, -1, "sigma"), StateLabel(2, 1, "sigma"), StateLabel(1, -1, "sigma")])
    def test_noninteger_eigenstates(self, label):
        p = ModelParams(g=1.0, epsilon=0.25, delta=0.3)
        b = build_basis(70)
        state = zeroth_order_state(label, p, b)
        E0 = p.omega * (label.n + label.branch * p.M / 2.0)
        H0 = build_unperturbed_rotated(p, b)
        assert np.linalg.norm(H0 @ state - E0 * state) < 1e-8
        assert np.linalg.norm(state) == pytest.approx(1.0)

    @pytest.mark.parametrize("label", [StateLabel(0, 0, "alpha"), StateLabel(1, 1, "alpha"), StateLabel(3, -1, "alpha")])
    def test_integer_eigenstates(self, label):
        p = ModelParams(g=1.0, epsilon=0.5, delta=0.3)
        b = build_basis(70)
        state = zeroth_order_state(label, p, b)
        E0 = p.omega * (label.n - p.M / 2.0)
        assert np.linalg.norm(build_unperturbed_rotated(p, b) @ state - E0 * state) < 1e-8

    def test_first_order_shift_is_overlap(self):
        p = ModelParams(g=1.0, epsilon=0.5, delta=0.3)
        b = build_basis(70)
        state = zeroth_order_state(StateLabel(1, 1, "alpha"), p, b)
        V = build_rotated_hamiltonian(p, b) - build_unperturbed_rotated(p, b)
        assert expectation(state, V) == pytest.approx(-0.3 * 2.0 * math.exp(-2.0), abs=1e-10)

    def test_alpha_rules(self):
        p = ModelParams(g=1.0, epsilon=0.5)
        b = build_basis(40)
        with pytest.raises(DomainError):
            zeroth_order_state(StateLabel(0, 1, "alpha"), p, b)
        with pytest.raises(DomainError):
            zeroth_order_state(StateLabel(2, 0, "alpha"), p, b)
