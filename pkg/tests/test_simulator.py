"""Statevector engine: rotations, expectation values, and exact gradients."""

import numpy as np
import pytest
import scipy.linalg

import pnovqe as pq
from pnovqe.operators import QubitOperator
from pnovqe.simulator import (
    ansatz_expectation,
    ansatz_state,
    apply_operator,
    finite_difference_gradient,
)

from test_operators import dense_from_string
from ci_oracle import random_integral_set


class TestPrepareReference:
    def test_occupied_bits(self):
        state = pq.prepare_reference(4, [0, 1])
        assert state.amplitudes[0b0011] == 1.0
        assert state.norm() == pytest.approx(1.0)

    def test_vacuum(self):
        state = pq.prepare_reference(2, [])
        assert state.amplitudes[0] == 1.0

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            pq.prepare_reference(4, [1, 1])

    def test_reference_energy_is_hf(self, h2_sto3g):
        state = pq.prepare_reference(4, [0, 1])
        energy = pq.expectation(state, h2_sto3g["hamiltonian"])
        assert energy == pytest.approx(h2_sto3g["scf"].total_energy, abs=1e-10)


class TestPauliRotation:
    def test_zero_angle_identity(self):
        state = pq.prepare_reference(3, [0, 2])
        before = state.amplitudes.copy()
        pq.apply_pauli_rotation(state, pq.PauliString.from_label(3, "X1 Z2"), 0.0)
        np.testing.assert_array_equal(state.amplitudes, before)

    def test_x_rotation_pi(self):
        state = pq.prepare_reference(1, [])
        pq.apply_pauli_rotation(state, pq.PauliString.from_label(1, "X0"), np.pi)
        np.testing.assert_allclose(state.amplitudes, [0.0, -1.0j], atol=1e-15)

    def test_random_rotations_match_expm(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = 4
            x, z = int(rng.integers(0, 16)), int(rng.integers(0, 16))
            string = pq.PauliString(n, x, z)
            theta = float(rng.uniform(-3, 3))
            vec = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            vec /= np.linalg.norm(vec)
            state = pq.Statevector(n, vec.copy())
            pq.apply_pauli_rotation(state, string, theta)
            u = scipy.linalg.expm(-0.5j * theta * dense_from_string(string))
            np.testing.assert_allclose(state.amplitudes, u @ vec, atol=1e-12)

    def test_norm_preserved_through_sequences(self):
        rng = np.random.default_rng(6)
        state = pq.prepare_reference(5, [0, 3])
        for _ in range(60):
            string = pq.PauliString(
                5, int(rng.integers(0, 32)), int(rng.integers(0, 32))
            )
            pq.apply_pauli_rotation(state, string, float(rng.uniform(-3, 3)))
        assert abs(state.norm() - 1.0) < 1e-10


class TestApplyAnsatz:
    def test_zero_parameters_leave_reference(self, h2_sto3g):
        ansatz = pq.build_upccgsd(2, 2)
        state = ansatz_state(ansatz, np.zeros(3))
        expected = pq.prepare_reference(4, [0, 1])
        assert state.fidelity(expected) == pytest.approx(1.0, abs=1e-12)

    def test_single_pair_double_matches_expm(self):
        gen = pq.make_pair_double(0, 1, 2)
        ansatz = pq.Ansatz(
            generators=(gen,), n_qubits=4, reference=(0, 1), name="d"
        )
        dense = QubitOperator(4, {(s.x, s.z): c for s, c in gen.strings}).to_dense()
        for theta in (-1.3, 0.4, 2.2):
            state = ansatz_state(ansatz, [theta])
            ref = np.zeros(16, dtype=complex)
            ref[0b0011] = 1.0
            expected = scipy.linalg.expm(-0.5j * theta * dense) @ ref
            np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)
            # two-determinant structure: only |0011> and |1100> populated
            populated = np.nonzero(np.abs(state.amplitudes) > 1e-12)[0]
            assert set(populated) <= {0b0011, 0b1100}

    def test_first_double_parameter_periodicity(self, h2_sto3g):
        # shifting the leading pair-double angle by 2 pi leaves the state
        # invariant up to phase (its generator squares to a projector that
        # fixes the reference)
        ansatz = pq.build_upccgsd(2, 2)
        rng = np.random.default_rng(8)
        for _ in range(5):
            theta = rng.uniform(-1, 1, 3)
            shifted = theta.copy()
            shifted[0] += 2.0 * np.pi
            a = ansatz_state(ansatz, theta)
            b = ansatz_state(ansatz, shifted)
            assert a.fidelity(b) == pytest.approx(1.0, abs=1e-10)

    def test_particle_number_conserved(self, h2_sto3g):
        ansatz = pq.build_upccgsd(2, 2)
        n_op = pq.number_operator(4)
        rng = np.random.default_rng(9)
        for _ in range(5):
            state = ansatz_state(ansatz, rng.uniform(-2, 2, 3))
            assert pq.expectation(state, n_op) == pytest.approx(2.0, abs=1e-10)

    def test_parameter_length_mismatch(self):
        ansatz = pq.build_upccgsd(2, 2)
        with pytest.raises(ValueError, match="length"):
            ansatz_state(ansatz, [0.1])


class TestExpectation:
    def test_identity(self):
        state = pq.prepare_reference(3, [1])
        assert pq.expectation(state, QubitOperator.identity(3)) == pytest.approx(1.0)

    def test_z_on_vacuum(self):
        state = pq.prepare_reference(2, [])
        z0 = QubitOperator.from_string(pq.PauliString.from_label(2, "Z0"))
        assert pq.expectation(state, z0) == pytest.approx(1.0)

    def test_non_hermitian_rejected(self):
        state = pq.prepare_reference(1, [])
        op = QubitOperator(1, {(1, 0): 1j})
        with pytest.raises(ValueError, match="Hermitian"):
            pq.expectation(state, op)

    def test_apply_operator_matches_dense(self):
        mo = random_integral_set(2, 2, 12)
        hq = pq.jordan_wigner(pq.build_hamiltonian(mo), 4)
        rng = np.random.default_rng(0)
        vec = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(
            apply_operator(hq, vec), hq.to_dense() @ vec, atol=1e-12
        )


class TestGradient:
    def test_stationary_at_zero_for_diagonal_hamiltonian(self):
        # one-body Hamiltonian diagonal in the orbital basis: the reference
        # determinant is an eigenstate, so the gradient vanishes at zero
        h = np.diag([-1.2, 0.4, 0.9])
        mo = pq.IntegralSet(
            n_orb=3, h=h, g=np.zeros((3,) * 4), core_energy=0.0, n_electrons=2,
        )
        hq = pq.jordan_wigner(pq.build_hamiltonian(mo), 6)
        ansatz = pq.build_upccgsd(3, 2)
        grad = pq.gradient(hq, ansatz, np.zeros(ansatz.n_parameters))
        np.testing.assert_allclose(grad, 0.0, atol=1e-12)

    def test_finite_difference_agreement_h2(self, h2_sto3g):
        ansatz = pq.build_upccgsd(2, 2)
        hq = h2_sto3g["hamiltonian"]
        rng = np.random.default_rng(10)
        for _ in range(5):
            theta = rng.uniform(-1, 1, 3)
            fd = finite_difference_gradient(hq, ansatz, theta)
            for method in ("adjoint", "shift"):
                grad = pq.gradient(hq, ansatz, theta, method=method)
                np.testing.assert_allclose(grad, fd, atol=1e-6)

    def test_shift_and_adjoint_agree(self):
        mo = random_integral_set(3, 2, 31)
        hq = pq.jordan_wigner(pq.build_hamiltonian(mo), 6)
        ansatz = pq.build_upccgsd(3, 2)
        rng = np.random.default_rng(11)
        for _ in range(20):
            theta = rng.uniform(-1.5, 1.5, ansatz.n_parameters)
            adjoint = pq.gradient(hq, ansatz, theta, method="adjoint")
            shift = pq.gradient(hq, ansatz, theta, method="shift")
            np.testing.assert_allclose(adjoint, shift, atol=1e-10)

    def test_unknown_method(self, h2_sto3g):
        ansatz = pq.build_upccgsd(2, 2)
        with pytest.raises(ValueError, match="method"):
            pq.gradient(h2_sto3g["hamiltonian"], ansatz, np.zeros(3), method="spsa")


class TestStatevectorLimits:
    def test_qubit_cap(self):
        with pytest.raises(ValueError, match="26"):
            pq.Statevector(27)

    def test_energy_at_zero_matches_hf_for_pno_space(self, lih_like):
        mo = lih_like["mo"]
        amps = pq.mp2_amplitudes(mo)
        pnos = pq.select_pnos(pq.pair_densities(amps), 8, diagonal_only=True)
        space = pq.orthonormalize(pnos)
        final = pq.build_final_integrals(mo, space)
        hq = pq.jordan_wigner(pq.build_hamiltonian(final), 8)
        ansatz = pq.build_pno_ansatz(space, "UpCCD")
        e0 = ansatz_expectation(hq, ansatz, np.zeros(ansatz.n_parameters))
        assert e0 == pytest.approx(lih_like["scf"].total_energy, abs=1e-10)
