"""Exact statevector engine: reference states, Pauli rotations, gradients.

Amplitudes are indexed little-endian (bit j of the basis index is qubit j).
Ansatz circuits are products of commuting-string exponentials, so every
generator is applied exactly, without Trotter error. Gradients come either
from the statevector adjoint sweep (default) or from the two-point shift
rule applied rotation by rotation, which is exact for Pauli generators.
"""

from __future__ import annotations

import numpy as np

from .ansatz import Ansatz
from .operators import PauliString, QubitOperator

MAX_QUBITS = 26


class Statevector:
    """Normalized complex amplitude vector over 2^n basis states."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if n_qubits > MAX_QUBITS:
            raise ValueError(f"statevector limited to {MAX_QUBITS} qubits")
        self.n_qubits = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(1 << n_qubits, dtype=complex)
            amplitudes[0] = 1.0
        self.amplitudes = np.asarray(amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << n_qubits,):
            raise ValueError("amplitude vector has wrong length")

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def fidelity(self, other: "Statevector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))


def prepare_reference(n_qubits: int, occupied) -> Statevector:
    """Computational basis state with the listed qubits set to 1."""
    occupied = list(occupied)
    if len(set(occupied)) != len(occupied):
        raise ValueError("duplicate index in reference occupation")
    index = 0
    for j in occupied:
        if j >= n_qubits or j < 0:
            raise ValueError("reference index outside register")
        index |= 1 << j
    state = Statevector(n_qubits)
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


_INDEX_CACHE: dict = {}


def _indices(n_qubits: int) -> np.ndarray:
    if n_qubits not in _INDEX_CACHE:
        _INDEX_CACHE[n_qubits] = np.arange(1 << n_qubits, dtype=np.int64)
    return _INDEX_CACHE[n_qubits]


def _apply_string(vec: np.ndarray, n_qubits: int, x: int, z: int) -> np.ndarray:
    """P |psi> for one Pauli string given as masks."""
    idx = _indices(n_qubits)
    phase = (1j) ** ((x & z).bit_count())
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)
    scaled = (phase * signs) * vec
    if x == 0:
        return scaled
    return scaled[idx ^ x]


def apply_pauli_rotation(state: Statevector, string: PauliString, angle: float) -> Statevector:
    """In-place exp(-i angle/2 P): cos(a/2) psi - i sin(a/2) P psi."""
    if string.n_qubits != state.n_qubits:
        raise ValueError("Pauli string length does not match register")
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    if s == 0.0:
        return state
    p_psi = _apply_string(state.amplitudes, state.n_qubits, string.x, string.z)
    state.amplitudes = c * state.amplitudes - 1j * s * p_psi
    return state


def _apply_generator_exponential(state: Statevector, gen, angle: float) -> None:
    for string, coeff in gen.strings:
        apply_pauli_rotation(state, string, angle * coeff)


def apply_ansatz(state: Statevector, ansatz: Ansatz, theta) -> Statevector:
    """Apply exp(-i theta_k/2 G_k) for every generator in ansatz order."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_parameters,):
        raise ValueError("parameter vector length does not match the ansatz")
    if ansatz.n_qubits != state.n_qubits:
        raise ValueError("ansatz register does not match the state")
    for gen, angle in zip(ansatz.generators, theta):
        _apply_generator_exponential(state, gen, angle)
    if abs(state.norm() - 1.0) > 1e-10:
        raise RuntimeError("state norm drifted beyond 1e-10")
    return state


def ansatz_state(ansatz: Ansatz, theta) -> Statevector:
    """Reference state with the parametrized circuit applied."""
    state = prepare_reference(ansatz.n_qubits, ansatz.reference)
    return apply_ansatz(state, ansatz, theta)


def _compiled_groups(op: QubitOperator):
    """Group terms by X-mask and pre-evaluate their diagonal factors."""
    if op._compiled is not None:
        return op._compiled
    idx = _indices(op.n_qubits)
    groups: dict = {}
    for (x, z), coeff in op.raw_items():
        phase = coeff * (1j) ** ((x & z).bit_count())
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)
        if x in groups:
            groups[x] = groups[x] + phase * signs
        else:
            groups[x] = phase * signs
    compiled = []
    for x in sorted(groups):
        perm = (idx ^ x) if x else None
        compiled.append((perm, groups[x]))
    op._compiled = compiled
    return compiled


def apply_operator(op: QubitOperator, vec: np.ndarray) -> np.ndarray:
    """H |psi> over the full register, using the compiled term groups."""
    out = np.zeros_like(vec)
    for perm, diag in _compiled_groups(op):
        contrib = diag * vec
        out += contrib if perm is None else contrib[perm]
    return out


def expectation(state: Statevector, op: QubitOperator) -> float:
    """<psi|H|psi> for Hermitian H; the residual imaginary part is checked."""
    if op.n_qubits != state.n_qubits:
        raise ValueError("operator register does not match the state")
    if op.max_imag() >= 1e-8:
        raise ValueError("operator is not Hermitian (complex coefficients)")
    value = np.vdot(state.amplitudes, apply_operator(op, state.amplitudes))
    if abs(value.imag) > 1e-10:
        raise RuntimeError("expectation value has a non-negligible imaginary part")
    return float(value.real)


def ansatz_expectation(op: QubitOperator, ansatz: Ansatz, theta) -> float:
    return expectation(ansatz_state(ansatz, theta), op)


def gradient(op: QubitOperator, ansatz: Ansatz, theta, method: str = "adjoint") -> np.ndarray:
    """d<H>/d(theta_k) for every parameter.

    ``adjoint`` runs the exact reverse statevector sweep; ``shift`` applies
    the two-point rule exp-value difference at +-pi/2 to each Pauli rotation
    of a generator and sums the contributions. Both are exact and agree to
    tight tolerance.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_parameters,):
        raise ValueError("parameter vector length does not match the ansatz")
    if method == "adjoint":
        return _gradient_adjoint(op, ansatz, theta)
    if method == "shift":
        return _gradient_shift(op, ansatz, theta)
    raise ValueError(f"unknown gradient method {method!r}")


def _gradient_adjoint(op, ansatz, theta) -> np.ndarray:
    phi = ansatz_state(ansatz, theta)
    lam = Statevector(ansatz.n_qubits, apply_operator(op, phi.amplitudes))
    psi = phi
    grad = np.zeros(ansatz.n_parameters)
    for k in range(ansatz.n_parameters - 1, -1, -1):
        gen = ansatz.generators[k]
        g_psi = np.zeros_like(psi.amplitudes)
        for string, coeff in gen.strings:
            g_psi += coeff * _apply_string(psi.amplitudes, psi.n_qubits, string.x, string.z)
        grad[k] = float(np.imag(np.vdot(lam.amplitudes, g_psi)))
        _apply_generator_exponential(psi, gen, -theta[k])
        _apply_generator_exponential(lam, gen, -theta[k])
    return grad


def _gradient_shift(op, ansatz, theta) -> np.ndarray:
    grad = np.zeros(ansatz.n_parameters)
    for k, gen in enumerate(ansatz.generators):
        for m, (_, coeff) in enumerate(gen.strings):
            e_plus = _shifted_energy(op, ansatz, theta, k, m, 0.5 * np.pi)
            e_minus = _shifted_energy(op, ansatz, theta, k, m, -0.5 * np.pi)
            grad[k] += coeff * 0.5 * (e_plus - e_minus)
    return grad


def _shifted_energy(op, ansatz, theta, k_gen, m_string, offset) -> float:
    state = prepare_reference(ansatz.n_qubits, ansatz.reference)
    for k, (gen, angle) in enumerate(zip(ansatz.generators, theta)):
        for m, (string, coeff) in enumerate(gen.strings):
            rotation = angle * coeff
            if k == k_gen and m == m_string:
                rotation += offset
            apply_pauli_rotation(state, string, rotation)
    return expectation(state, op)


def finite_difference_gradient(op, ansatz, theta, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the energy; test oracle, not for runs."""
    theta = np.asarray(theta, dtype=float)
    grad = np.zeros_like(theta)
    for k in range(len(theta)):
        plus = theta.copy()
        minus = theta.copy()
        plus[k] += step
        minus[k] -= step
        grad[k] = (
            ansatz_expectation(op, ansatz, plus)
            - ansatz_expectation(op, ansatz, minus)
        ) / (2.0 * step)
    return grad
