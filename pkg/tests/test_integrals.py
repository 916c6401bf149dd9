"""Geometry parsing, Boys function, s-Gaussian integrals, FCIDUMP I/O."""

import math

import numpy as np
import pytest
import scipy.integrate

import pnovqe as pq
from pnovqe.integrals import ParseError, _prim_norm

from ci_oracle import random_integral_set
from conftest import h2_pipeline


class TestParseXYZ:
    def test_h2_unit_conversion(self):
        mol = pq.parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414")
        r = np.linalg.norm(mol.atoms[0][2] - mol.atoms[1][2])
        assert r == pytest.approx(1.40104, abs=1e-4)
        assert mol.n_electrons == 2

    def test_single_helium(self):
        mol = pq.parse_xyz("1\n\nHe 0 0 0")
        assert mol.atoms[0][1] == 2

    def test_unknown_element_reports_line(self):
        with pytest.raises(ParseError, match="unknown element Xx at line 4"):
            pq.parse_xyz("2\n\nH 0 0 0\nXx 0 0 1")

    def test_non_numeric_coordinate(self):
        with pytest.raises(ParseError, match="line 3"):
            pq.parse_xyz("1\n\nH 0 zero 0")

    def test_malformed_count(self):
        with pytest.raises(ParseError, match="count"):
            pq.parse_xyz("two\n\nH 0 0 0")

    def test_charged_molecule_parity(self):
        mol = pq.parse_xyz("2\n\nHe 0 0 0\nH 0 0 0.9", charge=1)
        assert mol.n_electrons == 2
        with pytest.raises(ValueError, match="odd electron"):
            pq.parse_xyz("1\n\nH 0 0 0")


class TestBoys:
    def test_at_zero(self):
        assert pq.boys(0, 0.0) == pytest.approx(1.0, abs=1e-14)
        for n in range(9):
            assert pq.boys(n, 0.0) == pytest.approx(1.0 / (2 * n + 1), abs=1e-14)

    @pytest.mark.parametrize("n,x", [(0, 1.0), (0, 0.3), (2, 4.5), (5, 12.0),
                                     (8, 30.0), (3, 40.0), (0, 60.0)])
    def test_against_adaptive_quadrature(self, n, x):
        oracle, err = scipy.integrate.quad(
            lambda t: t ** (2 * n) * math.exp(-x * t * t), 0.0, 1.0,
            epsabs=1e-14, epsrel=1e-13,
        )
        assert err < 1e-12
        assert pq.boys(n, x) == pytest.approx(oracle, abs=1e-12)

    def test_f0_at_one_value(self):
        assert pq.boys(0, 1.0) == pytest.approx(0.7468241328124271, abs=1e-12)

    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_downward_recursion(self, x):
        for n in range(9):
            lhs = pq.boys(n, x)
            rhs = (2.0 * x * pq.boys(n + 1, x) + math.exp(-x)) / (2 * n + 1)
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_domain_guards(self):
        with pytest.raises(ValueError):
            pq.boys(-1, 1.0)
        with pytest.raises(ValueError):
            pq.boys(17, 1.0)
        with pytest.raises(ValueError):
            pq.boys(0, -0.5)


def _grid_overlap(shell_a, shell_b, spacing=0.12, extent=7.5):
    """Direct 3-D quadrature of two contracted s-Gaussians (trapezoid grid)."""
    axis = np.arange(-extent, extent + spacing, spacing)
    total = 0.0
    yy, zz = np.meshgrid(axis, axis, indexing="ij")
    for x in axis:
        val_a = np.zeros_like(yy)
        val_b = np.zeros_like(yy)
        for alpha, coef in zip(shell_a.exponents, shell_a.coefficients):
            r2 = ((x - shell_a.center[0]) ** 2 + (yy - shell_a.center[1]) ** 2
                  + (zz - shell_a.center[2]) ** 2)
            val_a += coef * _prim_norm(alpha) * np.exp(-alpha * r2)
        for alpha, coef in zip(shell_b.exponents, shell_b.coefficients):
            r2 = ((x - shell_b.center[0]) ** 2 + (yy - shell_b.center[1]) ** 2
                  + (zz - shell_b.center[2]) ** 2)
            val_b += coef * _prim_norm(alpha) * np.exp(-alpha * r2)
        total += np.sum(val_a * val_b)
    return total * spacing**3


class TestAOIntegrals:
    def test_h2_overlap_against_quadrature(self):
        mol = pq.parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7408481486")  # 1.4 bohr
        shells = pq.sto3g_shells(mol)
        ao = pq.compute_ao_integrals(mol, shells)
        assert ao.overlap[0, 1] == pytest.approx(0.6593, abs=2e-4)
        oracle = _grid_overlap(shells[0], shells[1])
        assert ao.overlap[0, 1] == pytest.approx(oracle, abs=1e-6)

    def test_contracted_normalization(self):
        mol = pq.parse_xyz("1\n\nHe 0 0 0", charge=0)
        ao = pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))
        assert ao.overlap[0, 0] == pytest.approx(1.0, abs=1e-10)

    def test_helium_sign_structure(self):
        mol = pq.parse_xyz("1\n\nHe 0 0 0")
        ao = pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))
        assert ao.eri[0, 0, 0, 0] > 0.0
        assert ao.core_hamiltonian[0, 0] < 0.0

    def test_overlap_positive_definite_and_symmetries(self):
        mol = pq.parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7414")
        ao = pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))
        assert np.linalg.eigvalsh(ao.overlap).min() > 0.0
        g = ao.eri
        for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
            np.testing.assert_allclose(g, g.transpose(perm), atol=1e-12)

    def test_nuclear_coincidence(self):
        mol = pq.Molecule(
            atoms=(("H", 1, np.zeros(3)), ("H", 1, np.zeros(3)))
        )
        with pytest.raises(ValueError, match="coincidence"):
            pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))

    def test_nuclear_repulsion(self):
        mol = pq.parse_xyz("2\n\nH 0 0 0\nH 0 0 0.7408481486")
        ao = pq.compute_ao_integrals(mol, pq.sto3g_shells(mol))
        assert ao.nuclear_repulsion == pytest.approx(1.0 / 1.4, abs=1e-7)


class TestFCIDump:
    def test_roundtrip_identity(self, tmp_path):
        mo = random_integral_set(3, 2, 9, with_energies=True)
        path = tmp_path / "random.fcidump"
        pq.write_fcidump(mo, path)
        back = pq.read_fcidump(path)
        np.testing.assert_allclose(back.h, mo.h, atol=1e-12)
        np.testing.assert_allclose(back.g, mo.g, atol=1e-12)
        assert back.core_energy == pytest.approx(mo.core_energy, abs=1e-12)
        np.testing.assert_allclose(
            back.orbital_energies, mo.orbital_energies, atol=1e-12
        )
        assert back.n_orb == mo.n_orb and back.n_electrons == mo.n_electrons

    def test_single_body_line(self, tmp_path):
        path = tmp_path / "one.fcidump"
        path.write_text("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n0.5 1 1 1 1\n")
        mo = pq.read_fcidump(path)
        assert mo.g[0, 0, 0, 0] == pytest.approx(0.5)

    def test_d_exponent_accepted(self, tmp_path):
        path = tmp_path / "d.fcidump"
        path.write_text("&FCI NORB=1,NELEC=2,MS2=0,\n/\n0.5D-01 1 1 0 0\n")
        mo = pq.read_fcidump(path)
        assert mo.h[0, 0] == pytest.approx(0.05)

    def test_missing_header_keys(self, tmp_path):
        path = tmp_path / "bad.fcidump"
        path.write_text("&FCI NELEC=2,\n&END\n")
        with pytest.raises(ParseError, match="NORB"):
            pq.read_fcidump(path)

    def test_odd_nelec_rejected(self, tmp_path):
        path = tmp_path / "odd.fcidump"
        path.write_text("&FCI NORB=2,NELEC=3,MS2=1,\n&END\n")
        with pytest.raises(ParseError, match="odd NELEC"):
            pq.read_fcidump(path)

    def test_index_out_of_range(self, tmp_path):
        path = tmp_path / "range.fcidump"
        path.write_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n0.5 3 1 1 1\n")
        with pytest.raises(ParseError, match="out of range"):
            pq.read_fcidump(path)

    def test_roundtrip_preserves_fci_energy(self, tmp_path):
        base = h2_pipeline(1.4)
        sector = pq.sector_basis(4, 2, two_sz=0)
        e_before, _ = pq.exact_ground_energy(base["hamiltonian"], sector)
        path = tmp_path / "h2.fcidump"
        pq.write_fcidump(base["mo"], path)
        mo2 = pq.read_fcidump(path)
        h2q = pq.jordan_wigner(pq.build_hamiltonian(mo2), 4)
        e_after, _ = pq.exact_ground_energy(h2q, sector)
        assert e_after == pytest.approx(e_before, abs=1e-10)
