"""Shared test fixtures: built-in systems and generated FCIDUMP data."""

from __future__ import annotations

import numpy as np
import pytest

import pnovqe as pq
from pnovqe.integrals import ANGSTROM_TO_BOHR


def h2_xyz(r_bohr: float) -> str:
    r_angstrom = r_bohr / ANGSTROM_TO_BOHR
    return f"2\n\nH 0 0 0\nH 0 0 {r_angstrom:.12f}"


def h2_pipeline(r_bohr: float = 1.4) -> dict:
    mol = pq.parse_xyz(h2_xyz(r_bohr))
    ao = pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))
    scf = pq.run_rhf(ao, mol.n_electrons)
    mo = pq.transform_to_mo(
        ao, scf.mo_coefficients, mol.n_electrons,
        orbital_energies=scf.orbital_energies,
    )
    hamiltonian = pq.jordan_wigner(pq.build_hamiltonian(mo), 2 * mo.n_orb)
    return {"mol": mol, "ao": ao, "scf": scf, "mo": mo, "hamiltonian": hamiltonian}


@pytest.fixture(scope="session")
def h2_sto3g():
    """H2/STO-3G at 1.4 bohr, the desk-scale baseline system."""
    return h2_pipeline(1.4)


# Even-tempered all-s sets used to play the role of an externally computed
# larger basis (ingested through FCIDUMP).
H_S10_EXPONENTS = (0.055, 3.1)     # alpha0, ratio; 5 shells per H atom
HE_S8_EXPONENTS = (0.16, 3.4)      # 4 shells per He atom


def h2_big_integrals(r_bohr: float) -> pq.IntegralSet:
    mol = pq.parse_xyz(h2_xyz(r_bohr))
    shells = []
    for _, _, pos in mol.atoms:
        shells.extend(pq.even_tempered_shells(pos, 5, *H_S10_EXPONENTS))
    ao = pq.compute_ao_integrals(mol, shells)
    scf = pq.run_rhf(ao, mol.n_electrons)
    assert scf.converged
    return pq.transform_to_mo(
        ao, scf.mo_coefficients, mol.n_electrons,
        orbital_energies=scf.orbital_energies,
    )


def he_big_integrals() -> pq.IntegralSet:
    mol = pq.Molecule(atoms=(("He", 2, np.zeros(3)),))
    shells = pq.even_tempered_shells(np.zeros(3), 4, *HE_S8_EXPONENTS)
    ao = pq.compute_ao_integrals(mol, shells)
    scf = pq.run_rhf(ao, mol.n_electrons)
    assert scf.converged
    return pq.transform_to_mo(
        ao, scf.mo_coefficients, mol.n_electrons,
        orbital_energies=scf.orbital_energies,
    )


@pytest.fixture(scope="session")
def h2_big_fcidump(tmp_path_factory):
    """10-orbital H2 integral set at 1.4 bohr, written and reread as FCIDUMP."""
    path = tmp_path_factory.mktemp("data") / "h2_s10.fcidump"
    pq.write_fcidump(h2_big_integrals(1.4), path)
    return path


@pytest.fixture(scope="session")
def he_big_fcidump(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "he_s8.fcidump"
    pq.write_fcidump(he_big_integrals(), path)
    return path


def lih_like_pipeline() -> dict:
    """All-s model of LiH at 3.0 bohr: 7 orbitals, 4 electrons."""
    li_pos = np.zeros(3)
    h_pos = np.array([0.0, 0.0, 3.0])
    mol = pq.Molecule(atoms=(("Li", 3, li_pos), ("H", 1, h_pos)))
    shells = list(pq.sto3g_shells(mol))
    shells.extend(pq.even_tempered_shells(li_pos, 2, 0.05, 4.0))
    shells.extend(pq.even_tempered_shells(h_pos, 2, 0.08, 5.0))
    ao = pq.compute_ao_integrals(mol, shells)
    scf = pq.run_rhf(ao, mol.n_electrons)
    assert scf.converged
    mo = pq.transform_to_mo(
        ao, scf.mo_coefficients, mol.n_electrons,
        orbital_energies=scf.orbital_energies,
    )
    return {"mol": mol, "ao": ao, "scf": scf, "mo": mo}


@pytest.fixture(scope="session")
def lih_like():
    return lih_like_pipeline()
