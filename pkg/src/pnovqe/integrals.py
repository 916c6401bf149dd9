"""Molecular geometry, s-type Gaussian integrals, and FCIDUMP interchange.

The built-in integral engine covers s-type contracted Gaussians only, which
is enough for the bundled desk-scale systems (H2, He, HeH+, all-s models of
LiH-like diatomics). Anything larger arrives through FCIDUMP files.

Units: coordinates are stored in bohr, energies in hartree. Two-electron
integrals are kept in physicists' notation <pq|rs> in memory and written in
chemists' notation (ij|kl) on disk, following the FCIDUMP convention.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

ANGSTROM_TO_BOHR = 1.8897261246
HARTREE_TO_KCALMOL = 627.5094740631

_ELEMENTS = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10, "Na": 11, "Mg": 12, "Al": 13, "Si": 14, "P": 15,
    "S": 16, "Cl": 17, "Ar": 18,
}

# Standard STO-3G s-type data: 1s contractions for H/He, 1s + 2s for Li/Be.
_STO3G = {
    "H": [([3.42525091, 0.62391373, 0.16885540],
           [0.15432897, 0.53532814, 0.44463454])],
    "He": [([6.36242139, 1.15892300, 0.31364979],
            [0.15432897, 0.53532814, 0.44463454])],
    "Li": [([16.1195750, 2.93620070, 0.79465050],
            [0.15432897, 0.53532814, 0.44463454]),
           ([0.63628970, 0.14786010, 0.04808870],
            [-0.09996723, 0.39951283, 0.70011547])],
    "Be": [([30.1678710, 5.49511530, 1.48719270],
            [0.15432897, 0.53532814, 0.44463454]),
           ([1.31483310, 0.30553890, 0.09937070],
            [-0.09996723, 0.39951283, 0.70011547])],
}


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Molecule:
    """Nuclear framework: (symbol, Z, position in bohr) plus charge."""

    atoms: tuple
    charge: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity != 1:
            raise ValueError("restricted formalism: multiplicity must be 1")
        for symbol, z, pos in self.atoms:
            if z < 1:
                raise ValueError(f"nuclear charge {z} < 1 for {symbol}")
            if not np.all(np.isfinite(pos)):
                raise ValueError(f"non-finite position for {symbol}")
        if self.n_electrons % 2 != 0:
            raise ValueError("odd electron count (closed-shell restriction)")

    @property
    def n_electrons(self) -> int:
        return sum(z for _, z, _ in self.atoms) - self.charge


def parse_xyz(text: str, charge: int = 0) -> Molecule:
    """Parse XYZ format (count line, comment, ``El x y z`` in angstrom)."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty XYZ input")
    try:
        count = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise ParseError(f"malformed count on line 1: {lines[0]!r}") from None
    if len(lines) < count + 2:
        raise ParseError(f"expected {count} atom lines, found {len(lines) - 2}")
    atoms = []
    for i in range(count):
        lineno = i + 3
        fields = lines[i + 2].split()
        if len(fields) < 4:
            raise ParseError(f"malformed atom entry at line {lineno}")
        symbol = fields[0].capitalize()
        if symbol not in _ELEMENTS:
            raise ParseError(f"unknown element {fields[0]} at line {lineno}")
        try:
            xyz = np.array([float(v) for v in fields[1:4]]) * ANGSTROM_TO_BOHR
        except ValueError:
            raise ParseError(f"non-numeric coordinate at line {lineno}") from None
        atoms.append((symbol, _ELEMENTS[symbol], xyz))
    return Molecule(atoms=tuple(atoms), charge=charge)


@dataclass(frozen=True)
class BasisShell:
    """Contracted s-type Gaussian; coefficients refer to normalized primitives."""

    center: np.ndarray
    exponents: tuple
    coefficients: tuple

    def __post_init__(self):
        if len(self.exponents) != len(self.coefficients) or not self.exponents:
            raise ValueError("exponents and coefficients must match, length >= 1")
        if any(a <= 0 for a in self.exponents):
            raise ValueError("Gaussian exponents must be strictly positive")


def _normalized_shell(center, exponents, coefficients) -> BasisShell:
    """Rescale contraction coefficients so the contracted self-overlap is 1."""
    shell = BasisShell(np.asarray(center, dtype=float), tuple(exponents),
                       tuple(coefficients))
    s = _contracted_overlap(shell, shell)
    return BasisShell(shell.center, shell.exponents,
                      tuple(c / math.sqrt(s) for c in shell.coefficients))


def sto3g_shells(molecule: Molecule) -> list[BasisShell]:
    """Built-in STO-3G s-shells (H through Be)."""
    shells = []
    for symbol, _, pos in molecule.atoms:
        if symbol not in _STO3G:
            raise ValueError(f"no built-in STO-3G s-data for element {symbol}")
        for exps, coefs in _STO3G[symbol]:
            shells.append(_normalized_shell(pos, exps, coefs))
    return shells


def even_tempered_shells(center, n: int, alpha0: float, ratio: float) -> list[BasisShell]:
    """Uncontracted even-tempered s-set: exponents alpha0 * ratio**k."""
    return [
        _normalized_shell(center, (alpha0 * ratio**k,), (1.0,))
        for k in range(n)
    ]


# ---------------------------------------------------------------------------
# Boys function


def boys(n: int, x: float) -> float:
    """Boys function F_n(x) = int_0^1 t^(2n) exp(-x t^2) dt."""
    if n < 0 or n > 16:
        raise ValueError("boys order limited to 0 <= n <= 16")
    if x < 0:
        raise ValueError("boys argument must be non-negative")
    return float(boys_all(n, x)[n])


def boys_all(n_max: int, x: float) -> np.ndarray:
    """F_0(x) .. F_{n_max}(x).

    For x < 35 the series F_n = e^-x sum_k (2x)^k / prod(2n+1 .. 2n+2k+1)
    is evaluated at n_max and recursed downward; beyond that the closed form
    F_0 = sqrt(pi/x)/2 plus stable upward recursion is exact to ~1e-15.
    """
    out = np.empty(n_max + 1)
    ex = math.exp(-x)
    if x >= 35.0:
        out[0] = 0.5 * math.sqrt(math.pi / x)
        for m in range(n_max):
            out[m + 1] = ((2 * m + 1) * out[m] - ex) / (2.0 * x)
        return out
    term = 1.0 / (2 * n_max + 1)
    total = term
    k = 0
    while term > 1e-18 * total:
        term *= 2.0 * x / (2 * n_max + 2 * k + 3)
        total += term
        k += 1
        if k > 500:  # pragma: no cover - series converges long before this
            break
    out[n_max] = ex * total
    for m in range(n_max - 1, -1, -1):
        out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1)
    return out


# ---------------------------------------------------------------------------
# AO integrals over contracted s-Gaussians


def _prim_norm(alpha: float) -> float:
    return (2.0 * alpha / math.pi) ** 0.75


def _contracted_overlap(sa: BasisShell, sb: BasisShell) -> float:
    rab2 = float(np.sum((sa.center - sb.center) ** 2))
    total = 0.0
    for a, ca in zip(sa.exponents, sa.coefficients):
        for b, cb in zip(sb.exponents, sb.coefficients):
            p = a + b
            pref = ca * cb * _prim_norm(a) * _prim_norm(b)
            total += pref * (math.pi / p) ** 1.5 * math.exp(-a * b / p * rab2)
    return total


@dataclass(frozen=True)
class AOIntegralSet:
    """Atomic-orbital integrals: overlap, core Hamiltonian, ERIs (chemists')."""

    n_ao: int
    overlap: np.ndarray
    core_hamiltonian: np.ndarray
    eri: np.ndarray
    nuclear_repulsion: float

    def __post_init__(self):
        s, h, g = self.overlap, self.core_hamiltonian, self.eri
        if not np.allclose(s, s.T, atol=1e-12):
            raise ValueError("overlap must be symmetric")
        if not np.allclose(h, h.T, atol=1e-12):
            raise ValueError("core Hamiltonian must be symmetric")
        for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
            if not np.allclose(g, g.transpose(perm), atol=1e-12):
                raise ValueError("(pq|rs) lacks 8-fold permutation symmetry")


def compute_ao_integrals(molecule: Molecule, shells: list[BasisShell]) -> AOIntegralSet:
    """Overlap, kinetic, nuclear attraction, and repulsion integrals.

    Closed-form expressions for contracted s-Gaussians; nuclear repulsion
    energy of the point charges is included.
    """
    n = len(shells)
    s_mat = np.zeros((n, n))
    t_mat = np.zeros((n, n))
    v_mat = np.zeros((n, n))
    charges = [(z, pos) for _, z, pos in molecule.atoms]

    for za, pa in charges:
        for zb, pb in charges:
            if pa is pb:
                continue
            if np.linalg.norm(pa - pb) < 1e-10:
                raise ValueError("nuclear coincidence: two charged nuclei overlap")

    e_nuc = 0.0
    for i, (za, pa) in enumerate(charges):
        for zb, pb in charges[i + 1 :]:
            e_nuc += za * zb / np.linalg.norm(pa - pb)

    for i in range(n):
        for j in range(i + 1):
            sij = tij = vij = 0.0
            sa, sb = shells[i], shells[j]
            rab2 = float(np.sum((sa.center - sb.center) ** 2))
            for a, ca in zip(sa.exponents, sa.coefficients):
                for b, cb in zip(sb.exponents, sb.coefficients):
                    p = a + b
                    mu = a * b / p
                    pref = ca * cb * _prim_norm(a) * _prim_norm(b)
                    kab = math.exp(-mu * rab2)
                    s0 = (math.pi / p) ** 1.5 * kab
                    sij += pref * s0
                    tij += pref * mu * (3.0 - 2.0 * mu * rab2) * s0
                    pc = (a * sa.center + b * sb.center) / p
                    for zc, rc in charges:
                        arg = p * float(np.sum((pc - rc) ** 2))
                        vij -= pref * zc * (2.0 * math.pi / p) * kab * boys(0, arg)
            s_mat[i, j] = s_mat[j, i] = sij
            t_mat[i, j] = t_mat[j, i] = tij
            v_mat[i, j] = v_mat[j, i] = vij

    eri = np.zeros((n, n, n, n))
    pair_index = lambda i, j: i * (i + 1) // 2 + j
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if pair_index(i, j) < pair_index(k, l):
                        continue
                    val = _eri_contracted(shells[i], shells[j], shells[k], shells[l])
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val
    return AOIntegralSet(
        n_ao=n,
        overlap=s_mat,
        core_hamiltonian=t_mat + v_mat,
        eri=eri,
        nuclear_repulsion=e_nuc,
    )


def _eri_contracted(sa, sb, sc, sd) -> float:
    rab2 = float(np.sum((sa.center - sb.center) ** 2))
    rcd2 = float(np.sum((sc.center - sd.center) ** 2))
    total = 0.0
    for a, ca in zip(sa.exponents, sa.coefficients):
        for b, cb in zip(sb.exponents, sb.coefficients):
            p = a + b
            pab = (a * sa.center + b * sb.center) / p
            kab = math.exp(-a * b / p * rab2)
            for c, cc in zip(sc.exponents, sc.coefficients):
                for d, cd in zip(sd.exponents, sd.coefficients):
                    q = c + d
                    pcd = (c * sc.center + d * sd.center) / q
                    kcd = math.exp(-c * d / q * rcd2)
                    rho = p * q / (p + q)
                    arg = rho * float(np.sum((pab - pcd) ** 2))
                    pref = (
                        ca * cb * cc * cd
                        * _prim_norm(a) * _prim_norm(b)
                        * _prim_norm(c) * _prim_norm(d)
                    )
                    total += (
                        pref
                        * 2.0 * math.pi**2.5
                        / (p * q * math.sqrt(p + q))
                        * kab * kcd * boys(0, arg)
                    )
    return total


# ---------------------------------------------------------------------------
# Molecular-orbital integral container and FCIDUMP I/O


@dataclass(frozen=True)
class IntegralSet:
    """Spatial-orbital integrals: h, <pq|rs> (physicists'), core energy."""

    n_orb: int
    h: np.ndarray
    g: np.ndarray
    core_energy: float
    n_electrons: int
    orbital_energies: np.ndarray | None = None
    pair_origin: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.h.shape != (self.n_orb, self.n_orb):
            raise ValueError("h has wrong shape")
        if self.g.shape != (self.n_orb,) * 4:
            raise ValueError("g has wrong shape")
        if not np.allclose(self.h, self.h.T, atol=1e-12):
            raise ValueError("h must be symmetric")
        g = self.g
        for perm in [(2, 1, 0, 3), (0, 3, 2, 1), (1, 0, 3, 2)]:
            if not np.allclose(g, g.transpose(perm), atol=1e-12):
                raise ValueError("<pq|rs> lacks real 8-fold symmetry")
        if self.n_electrons % 2 != 0:
            raise ValueError("n_electrons must be even")
        if self.n_electrons // 2 > self.n_orb:
            raise ValueError("more electron pairs than orbitals")

    @property
    def n_occ(self) -> int:
        return self.n_electrons // 2


def read_fcidump(path) -> IntegralSet:
    """Read an FCIDUMP file (chemists' notation, 1-based indices)."""
    with open(path) as fh:
        text = fh.read()
    header_match = re.search(r"(&END|/)", text)
    if not header_match:
        raise ParseError("FCIDUMP header terminator (&END or /) not found")
    header = text[: header_match.start()]
    body = text[header_match.end() :]

    def _header_int(key):
        m = re.search(rf"{key}\s*=\s*(-?\d+)", header, re.IGNORECASE)
        return int(m.group(1)) if m else None

    n_orb = _header_int("NORB")
    n_elec = _header_int("NELEC")
    if n_orb is None or n_elec is None:
        raise ParseError("FCIDUMP header must define NORB and NELEC")
    if n_elec % 2 != 0:
        raise ParseError("odd NELEC not supported (closed shell only)")

    h = np.zeros((n_orb, n_orb))
    chem = np.zeros((n_orb,) * 4)
    core = 0.0
    eps = np.full(n_orb, np.nan)
    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ParseError(f"malformed FCIDUMP line: {raw!r}")
        value = float(fields[0].upper().replace("D", "E"))
        i, j, k, l = (int(v) for v in fields[1:])
        if min(i, j, k, l) < 0 or max(i, j, k, l) > n_orb:
            raise ParseError(f"orbital index out of range in line: {raw!r}")
        if i == 0:
            core = value
        elif j == 0:
            eps[i - 1] = value
        elif k == 0:
            if l != 0:
                raise ParseError(f"malformed index pattern in line: {raw!r}")
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        elif l == 0:
            raise ParseError(f"malformed index pattern in line: {raw!r}")
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q in ((a, b), (b, a)):
                for r, s in ((c, d), (d, c)):
                    chem[p, q, r, s] = value
                    chem[r, s, p, q] = value
    orbital_energies = None if np.any(np.isnan(eps)) else eps
    return IntegralSet(
        n_orb=n_orb,
        h=h,
        g=chem.transpose(0, 2, 1, 3).copy(),
        core_energy=core,
        n_electrons=n_elec,
        orbital_energies=orbital_energies,
    )


def write_fcidump(mo: IntegralSet, path) -> None:
    """Write unique integrals in chemists' notation with 1-based indices."""
    n = mo.n_orb
    chem = mo.g.transpose(0, 2, 1, 3)
    lines = [
        f"&FCI NORB={n},NELEC={mo.n_electrons},MS2=0,",
        " ORBSYM=" + ",".join(["1"] * n) + ",",
        " ISYM=1,",
        "&END",
    ]

    def _emit(value, i, j, k, l):
        lines.append(f"{value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}")

    pair_index = lambda i, j: i * (i + 1) // 2 + j
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if pair_index(i, j) < pair_index(k, l):
                        continue
                    val = chem[i, j, k, l]
                    if abs(val) > 1e-14:
                        _emit(val, i + 1, j + 1, k + 1, l + 1)
    for i in range(n):
        for j in range(i + 1):
            if abs(mo.h[i, j]) > 1e-14:
                _emit(mo.h[i, j], i + 1, j + 1, 0, 0)
    if mo.orbital_energies is not None:
        for i, e in enumerate(mo.orbital_energies):
            _emit(e, i + 1, 0, 0, 0)
    _emit(mo.core_energy, 0, 0, 0, 0)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
