"""Exact diagonalization of qubit Hamiltonians and the paired encoding.

Ground energies come from a dense solve when the (sector-restricted) basis
is small and from Lanczos with full reorthogonalization otherwise. The
paired (seniority-zero) Hamiltonian encodes one doubly occupied spatial
orbital per qubit, halving the register relative to the spin-orbital
encoding; its coefficients are locked in by a projection-equivalence test
against the full Jordan-Wigner Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg
import scipy.sparse

from .ansatz import Ansatz, ExcitationGenerator
from .integrals import IntegralSet
from .operators import PauliString, QubitOperator

_DENSE_DIM = 2500
_MAX_DENSE_QUBITS = 16
_MAX_ITER_QUBITS = 24


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of fixed-particle-number (optionally fixed-S_z) states."""

    n_qubits: int
    n_particles: int
    two_sz: int | None
    states: np.ndarray   # int64 bitmasks, strictly increasing

    @property
    def dim(self) -> int:
        return len(self.states)


def sector_basis(n_qubits: int, n_particles: int, two_sz: int | None = None) -> SectorBasis:
    """All bitmasks with the requested popcount (and spin balance).

    Spin balance uses the interleaved convention: even qubits are spin up.
    ``two_sz`` is n_up - n_down.
    """
    if two_sz is None:
        states = [
            _mask_from(bits)
            for bits in combinations(range(n_qubits), n_particles)
        ]
    else:
        if (n_particles + two_sz) % 2 != 0:
            raise ValueError("incompatible particle number and 2*S_z parity")
        n_up = (n_particles + two_sz) // 2
        n_dn = n_particles - n_up
        ups = [q for q in range(n_qubits) if q % 2 == 0]
        dns = [q for q in range(n_qubits) if q % 2 == 1]
        if n_up < 0 or n_dn < 0 or n_up > len(ups) or n_dn > len(dns):
            raise ValueError("empty sector: spin balance not realizable")
        states = [
            _mask_from(u + d)
            for u in combinations(ups, n_up)
            for d in combinations(dns, n_dn)
        ]
    if not states:
        raise ValueError("empty sector basis")
    return SectorBasis(
        n_qubits=n_qubits,
        n_particles=n_particles,
        two_sz=two_sz,
        states=np.array(sorted(states), dtype=np.int64),
    )


def _mask_from(bits) -> int:
    mask = 0
    for b in bits:
        mask |= 1 << b
    return mask


def full_basis(n_qubits: int) -> SectorBasis:
    return SectorBasis(
        n_qubits=n_qubits,
        n_particles=-1,
        two_sz=None,
        states=np.arange(1 << n_qubits, dtype=np.int64),
    )


def sector_matrix(op: QubitOperator, basis: SectorBasis) -> scipy.sparse.csr_matrix:
    """Projection of the operator onto the sector basis as a sparse matrix."""
    states = basis.states
    dim = len(states)
    if op.n_terms == 0:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    rows, cols, vals = [], [], []
    for (x, z), coeff in op.raw_items():
        phase = coeff * (1j) ** ((x & z).bit_count())
        signs = 1.0 - 2.0 * (np.bitwise_count(states & z) & 1)
        images = states ^ x
        pos = np.searchsorted(states, images)
        ok = (pos < dim) & (states[np.minimum(pos, dim - 1)] == images)
        rows.append(pos[ok])
        cols.append(np.nonzero(ok)[0])
        vals.append(phase * signs[ok])
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim), dtype=complex,
    )
    return mat.tocsr()


def lanczos_ground(matrix, dim: int, tol: float = 1e-12, max_steps: int = 400,
                   seed: int = 12345):
    """Smallest eigenpair by Lanczos with full reorthogonalization."""
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim) + 0.0j
    q /= np.linalg.norm(q)
    basis = [q]
    alphas: list = []
    betas: list = []
    previous = np.inf
    for step in range(min(max_steps, dim)):
        w = matrix @ basis[-1]
        alpha = float(np.real(np.vdot(basis[-1], w)))
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization against every stored vector
        for vec in basis:
            w = w - np.vdot(vec, w) * vec
        beta = np.linalg.norm(w)
        evals, evecs = scipy.linalg.eigh_tridiagonal(alphas, betas)
        residual_bound = beta * abs(evecs[-1, 0])
        done = (
            (residual_bound < 1e-10 and abs(evals[0] - previous) < tol)
            or beta < 1e-13
            or step == dim - 1
        )
        if done:
            ground = np.zeros(dim, dtype=complex)
            for coeff, vec in zip(evecs[:, 0], basis):
                ground += coeff * vec
            ground /= np.linalg.norm(ground)
            return float(evals[0]), ground
        previous = evals[0]
        betas.append(float(beta))
        basis.append(w / beta)
    raise RuntimeError("Lanczos failed to converge")


def exact_ground_energy(op: QubitOperator, sector: SectorBasis | None = None):
    """Lowest eigenvalue and eigenvector of a Hermitian qubit operator.

    Small (sector) bases are solved densely, larger ones with Lanczos; the
    returned pair always satisfies ||Hv - Ev|| < 1e-8 in the chosen basis.
    """
    if op.max_imag() >= 1e-8:
        raise ValueError("operator is not Hermitian")
    if sector is None:
        if op.n_qubits > _MAX_DENSE_QUBITS:
            raise ValueError(
                f"full-space diagonalization limited to {_MAX_DENSE_QUBITS} qubits; "
                "restrict to a sector"
            )
        sector = full_basis(op.n_qubits)
    elif op.n_qubits > _MAX_ITER_QUBITS:
        raise ValueError(f"sector diagonalization limited to {_MAX_ITER_QUBITS} qubits")
    if sector.dim == 0:
        raise ValueError("empty sector")
    mat = sector_matrix(op, sector)
    if sector.dim <= _DENSE_DIM:
        dense = mat.toarray()
        evals, evecs = np.linalg.eigh(dense)
        energy, vector = float(evals[0]), evecs[:, 0]
    else:
        energy, vector = lanczos_ground(mat, sector.dim)
    residual = np.linalg.norm(mat @ vector - energy * vector)
    if residual > 1e-8:
        raise RuntimeError(f"eigenpair residual {residual:.2e} exceeds 1e-8")
    return energy, vector


def eigenvalues_dense(op: QubitOperator) -> np.ndarray:
    """Full spectrum of a small operator (test and comparison helper)."""
    return np.linalg.eigvalsh(op.to_dense())


# ---------------------------------------------------------------------------
# Seniority-zero (paired) encoding


def build_paired_hamiltonian(mo: IntegralSet) -> QubitOperator:
    """Seniority-zero restriction of the Hamiltonian on n_orb qubits.

    Qubit p means spatial orbital p is doubly occupied. In terms of the
    hard-core pair operators P+_p -> (X_p - i Y_p)/2:

        H = core + sum_p (2 h_pp + <pp|pp>) n_p
                 + sum_{p<q} (4 <pq|pq> - 2 <pq|qp>) n_p n_q
                 + sum_{p<q} <pp|qq> (X_p X_q + Y_p Y_q)/2
    """
    n = mo.n_orb
    terms: dict = {}

    def _add(x, z, coeff):
        key = (x, z)
        terms[key] = terms.get(key, 0.0) + coeff

    _add(0, 0, mo.core_energy)
    for p in range(n):
        w = 2.0 * mo.h[p, p] + mo.g[p, p, p, p]
        # n_p = (I - Z_p)/2
        _add(0, 0, 0.5 * w)
        _add(0, 1 << p, -0.5 * w)
    for p in range(n):
        for q in range(p + 1, n):
            w = 4.0 * mo.g[p, q, p, q] - 2.0 * mo.g[p, q, q, p]
            # n_p n_q = (I - Z_p - Z_q + Z_p Z_q)/4
            _add(0, 0, 0.25 * w)
            _add(0, 1 << p, -0.25 * w)
            _add(0, 1 << q, -0.25 * w)
            _add(0, (1 << p) | (1 << q), 0.25 * w)
            v = mo.g[p, p, q, q]
            xx = (1 << p) | (1 << q)
            _add(xx, 0, 0.5 * v)           # X_p X_q
            _add(xx, xx, 0.5 * v)          # Y_p Y_q
    return QubitOperator(n, terms)


def make_paired_rotation(i: int, a: int, n_orb: int) -> ExcitationGenerator:
    """Paired-encoding image of the pair excitation i -> a.

    i(P+_a P_i - P+_i P_a) = (Y_a X_i - X_a Y_i)/2 on two qubits; the two
    strings commute, so the exponential is an exact two-rotation circuit.
    """
    if i == a:
        raise ValueError("pair rotation needs two distinct orbitals")
    bit_i, bit_a = 1 << i, 1 << a
    strings = (
        (PauliString(n_orb, bit_i | bit_a, bit_a), 0.5),    # X_i Y_a
        (PauliString(n_orb, bit_i | bit_a, bit_i), -0.5),   # Y_i X_a
    )
    return ExcitationGenerator(kind="paired_double", orbitals=(i, a), spin=None,
                               strings=strings)


def build_paired_ansatz(occupied, pair_doubles, n_orb: int) -> Ansatz:
    """Pair-rotation circuit on n_orb qubits mirroring a PNO-UpCCD ansatz.

    ``pair_doubles`` lists (i, a) spatial excitations in ansatz order;
    ``occupied`` lists the reference's doubly occupied spatial orbitals.
    """
    gens = tuple(make_paired_rotation(i, a, n_orb) for i, a in pair_doubles)
    return Ansatz(
        generators=gens,
        n_qubits=n_orb,
        reference=tuple(sorted(occupied)),
        name="paired-UpCCD",
    )


def seniority_zero_projection(op: QubitOperator, n_orb: int) -> np.ndarray:
    """Dense matrix of the full operator restricted to paired states.

    Basis state m on n_orb qubits maps to the determinant with qubits
    2p and 2p+1 set for every bit p of m (test oracle for the paired
    Hamiltonian).
    """
    dim = 1 << n_orb
    paired_states = np.zeros(dim, dtype=np.int64)
    for m in range(dim):
        full = 0
        for p in range(n_orb):
            if (m >> p) & 1:
                full |= 0b11 << (2 * p)
        paired_states[m] = full
    mat = np.zeros((dim, dim), dtype=complex)
    for (x, z), coeff in op.raw_items():
        phase = coeff * (1j) ** ((x & z).bit_count())
        signs = 1.0 - 2.0 * (np.bitwise_count(paired_states & z) & 1)
        images = paired_states ^ x
        pos = np.searchsorted(paired_states, images)
        ok = (pos < dim) & (paired_states[np.minimum(pos, dim - 1)] == images)
        mat[pos[ok], np.nonzero(ok)[0]] += phase * signs[ok]
    return mat
