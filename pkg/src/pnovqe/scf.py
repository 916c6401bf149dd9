"""Restricted Hartree-Fock (Roothaan) solver and the MO transformation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrals import AOIntegralSet, IntegralSet


@dataclass(frozen=True)
class SCFResult:
    """Converged (or flagged) restricted Hartree-Fock solution."""

    mo_coefficients: np.ndarray
    orbital_energies: np.ndarray
    total_energy: float
    converged: bool
    iterations: int
    density_matrix: np.ndarray
    energy_history: tuple


def _orthogonalizer(overlap: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(overlap)
    if evals.min() < 1e-10:
        raise ValueError(
            f"linear dependence in basis (overlap eigenvalue {evals.min():.3e})"
        )
    return evecs @ np.diag(evals**-0.5) @ evecs.T


def _fock_matrix(ao: AOIntegralSet, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", ao.eri, density, optimize=True)
    k = np.einsum("prqs,rs->pq", ao.eri, density, optimize=True)
    return ao.core_hamiltonian + j - 0.5 * k


def run_rhf(
    ao: AOIntegralSet,
    n_electrons: int,
    max_iter: int = 100,
    energy_tol: float = 1e-10,
    density_tol: float = 1e-8,
    diis: bool = True,
    diis_size: int = 8,
) -> SCFResult:
    """Solve the closed-shell Roothaan equations.

    The core guess diagonalizes h in the symmetrically orthogonalized basis;
    convergence requires both the energy change and the density change to
    fall below their tolerances. Non-convergence is flagged, not raised.
    """
    if n_electrons % 2 != 0:
        raise ValueError("closed-shell solver needs an even electron count")
    if n_electrons > 2 * ao.n_ao:
        raise ValueError("more electrons than spin-orbitals")
    n_occ = n_electrons // 2
    x = _orthogonalizer(ao.overlap)
    h = ao.core_hamiltonian
    s = ao.overlap

    def _density(fock):
        f_ortho = x.T @ fock @ x
        eps, c_ortho = np.linalg.eigh(f_ortho)
        c = x @ c_ortho
        d = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        return eps, c, d

    eps, c, density = _density(h)
    energy = 0.5 * np.sum(density * (h + _fock_matrix(ao, density))) + ao.nuclear_repulsion

    fock_list: list = []
    error_list: list = []
    history = [energy]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        fock = _fock_matrix(ao, density)
        if diis:
            err = x.T @ (fock @ density @ s - s @ density @ fock) @ x
            fock_list.append(fock)
            error_list.append(err)
            if len(fock_list) > diis_size:
                fock_list.pop(0)
                error_list.pop(0)
            if len(fock_list) > 1:
                fock = _diis_extrapolate(fock_list, error_list)
        eps, c, new_density = _density(fock)
        new_energy = (
            0.5 * np.sum(new_density * (h + _fock_matrix(ao, new_density)))
            + ao.nuclear_repulsion
        )
        history.append(new_energy)
        delta_e = abs(new_energy - energy)
        delta_d = np.max(np.abs(new_density - density))
        density, energy = new_density, new_energy
        if delta_e < energy_tol and delta_d < density_tol:
            converged = True
            break

    # canonical orbitals from the final (un-extrapolated) Fock matrix
    eps, c, _ = _density(_fock_matrix(ao, density))
    return SCFResult(
        mo_coefficients=c,
        orbital_energies=eps,
        total_energy=float(energy),
        converged=converged,
        iterations=iterations,
        density_matrix=density,
        energy_history=tuple(history),
    )


def _diis_extrapolate(fock_list, error_list) -> np.ndarray:
    m = len(fock_list)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = np.sum(error_list[i] * error_list[j])
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        coeffs = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return fock_list[-1]
    return sum(ci * fi for ci, fi in zip(coeffs, fock_list))


def transform_to_mo(ao: AOIntegralSet, c: np.ndarray, n_electrons: int,
                    orbital_energies: np.ndarray | None = None) -> IntegralSet:
    """Four-index transform of the AO integrals into the MO basis.

    Output two-electron integrals are in physicists' notation,
    <pq|rs> = (pr|qs) over the chemists' AO tensor.
    """
    ctsc = c.T @ ao.overlap @ c
    if not np.allclose(ctsc, np.eye(c.shape[1]), atol=1e-8):
        raise ValueError("MO coefficients are not S-orthonormal")
    h_mo = c.T @ ao.core_hamiltonian @ c
    chem = np.einsum(
        "pqrs,pi,qj,rk,sl->ijkl", ao.eri, c, c, c, c, optimize=True
    )
    return IntegralSet(
        n_orb=c.shape[1],
        h=h_mo,
        g=chem.transpose(0, 2, 1, 3).copy(),
        core_energy=ao.nuclear_repulsion,
        n_electrons=n_electrons,
        orbital_energies=None if orbital_energies is None else np.asarray(orbital_energies),
    )
