"""Fermionic excitation generators and unitary pair-coupled-cluster ansaetze.

Every generator G is Hermitian (the factor i of the anti-Hermitian cluster
operator is absorbed), its Jordan-Wigner image is a set of mutually
commuting Pauli strings with real coefficients, and G^3 = G. The circuit
exp(-i theta/2 G) therefore compiles exactly into a product of Pauli
rotations, one per string, with no Trotter error.

Operator ordering inside a product ansatz is fixed for reproducibility:
pair-doubles block first, then generalized doubles, then singles, each block
in ascending index order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .operators import FermionOperator, jordan_wigner
from .pno import OrbitalSpace

PNO_VARIANTS = ("UpCCD", "UpCCSD", "UpCCGD", "UpCCGSD-restricted")


@dataclass(frozen=True)
class ExcitationGenerator:
    """One Hermitian excitation generator with its Pauli-string image."""

    kind: str             # "pair_double" or "single"
    orbitals: tuple       # (i, a) spatial indices
    spin: int | None      # 0 (up) / 1 (down) for singles, None for doubles
    strings: tuple        # ((PauliString, real coefficient), ...)

    @property
    def label(self) -> str:
        if self.kind == "pair_double":
            return f"D({self.orbitals[0]}->{self.orbitals[1]})"
        arrow = "u" if self.spin == 0 else "d"
        return f"S{arrow}({self.orbitals[0]}->{self.orbitals[1]})"


@dataclass(frozen=True)
class Ansatz:
    """Ordered product of parametrized excitation generators."""

    generators: tuple
    n_qubits: int
    reference: tuple     # occupied spin-orbital (qubit) indices
    name: str
    pair_structure: dict | None = None

    @property
    def n_parameters(self) -> int:
        return len(self.generators)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.reference, self.reference[1:])):
            raise ValueError("reference occupation must be strictly increasing")


def _generator_strings(op: FermionOperator, n_qubits: int) -> tuple:
    qubit_op = jordan_wigner(op, n_qubits)
    strings = []
    for string, coeff in qubit_op.items():
        if abs(coeff.imag) > 1e-12:
            raise ValueError("generator image has a complex coefficient")
        strings.append((string, float(coeff.real)))
    return tuple(strings)


def make_pair_double(i: int, a: int, n_spatial: int) -> ExcitationGenerator:
    """Pair excitation generator i(a+_au a_iu a+_ad a_id - h.c.).

    Both spin electrons of spatial orbital i move to spatial orbital a.
    The Jordan-Wigner image is 8 weight-4 strings with coefficients +-1/8
    supported on qubits {2i, 2i+1, 2a, 2a+1}; interior parity chains cancel.
    """
    if i == a:
        raise ValueError("pair double needs two distinct spatial orbitals")
    up_i, dn_i, up_a, dn_a = 2 * i, 2 * i + 1, 2 * a, 2 * a + 1
    op = FermionOperator.from_terms([
        (((up_a, True), (up_i, False), (dn_a, True), (dn_i, False)), 1.0j),
        (((dn_i, True), (dn_a, False), (up_i, True), (up_a, False)), -1.0j),
    ])
    return ExcitationGenerator(
        kind="pair_double",
        orbitals=(i, a),
        spin=None,
        strings=_generator_strings(op, 2 * n_spatial),
    )


def make_single(p: int, q: int, spin: int, n_spatial: int) -> ExcitationGenerator:
    """Single excitation generator i(a+_q a_p - h.c.) for one spin channel.

    The image is 2 strings whose weight grows with the parity chain between
    the two spin-orbitals: w = 2(q - p) + 1 for p < q in the interleaved
    ordering.
    """
    if p == q:
        raise ValueError("single excitation needs two distinct orbitals")
    so_p, so_q = 2 * p + spin, 2 * q + spin
    op = FermionOperator.from_terms([
        (((so_q, True), (so_p, False)), 1.0j),
        (((so_p, True), (so_q, False)), -1.0j),
    ])
    return ExcitationGenerator(
        kind="single",
        orbitals=(p, q),
        spin=spin,
        strings=_generator_strings(op, 2 * n_spatial),
    )


def build_upccgsd(n_spatial: int, n_electrons: int, layers: int = 1) -> Ansatz:
    """k-UpCCGSD over all spatial orbitals (k = layers, default 1).

    Generators per layer: all generalized pair doubles p < q, then all
    generalized singles p < q for both spins; 3 * C(N, 2) parameters.
    """
    if n_electrons % 2 != 0 or n_electrons > 2 * n_spatial:
        raise ValueError("invalid electron count for the register")
    gens = []
    for _ in range(layers):
        for p in range(n_spatial):
            for q in range(p + 1, n_spatial):
                gens.append(make_pair_double(p, q, n_spatial))
        for p in range(n_spatial):
            for q in range(p + 1, n_spatial):
                for spin in (0, 1):
                    gens.append(make_single(p, q, spin, n_spatial))
    return Ansatz(
        generators=tuple(gens),
        n_qubits=2 * n_spatial,
        reference=tuple(range(n_electrons)),
        name=f"UpCCGSD(k={layers})" if layers > 1 else "UpCCGSD",
    )


def _diagonal_pno_sets(space: OrbitalSpace) -> dict:
    """Occupied orbital -> list of its diagonal-pair PNO orbital indices."""
    sets: dict = {i: [] for i in space.occupied}
    for orb, (i, j) in sorted(space.pno_assignment.items()):
        if i == j and i in sets:
            sets[i].append(orb)
    return sets


def build_pno_ansatz(space: OrbitalSpace, variant: str) -> Ansatz:
    """Ansatz restricted to the diagonal-pair PNO structure of ``space``.

    UpCCD places one pair double i -> a for every PNO a attached to the
    diagonal pair (i, i); UpCCSD adds the two matching singles; UpCCGD adds
    generalized pair doubles a -> b inside each diagonal set, applied after
    the plain doubles block. PNOs selected from off-diagonal pairs act as
    spectator orbitals and contribute no generators.
    """
    if variant not in PNO_VARIANTS:
        raise ValueError(f"unknown PNO ansatz variant {variant!r}")
    if space.pno_assignment is None:
        raise ValueError("PNO metadata required to build a PNO-restricted ansatz")
    n_spatial = space.n_total
    diag = _diagonal_pno_sets(space)

    doubles = []
    for i in sorted(diag):
        for a in diag[i]:
            doubles.append((i, a))

    gens = [make_pair_double(i, a, n_spatial) for i, a in doubles]
    if variant in ("UpCCGD", "UpCCGSD-restricted"):
        for i in sorted(diag):
            orbs = diag[i]
            for m, a in enumerate(orbs):
                for b in orbs[m + 1 :]:
                    gens.append(make_pair_double(a, b, n_spatial))
    if variant in ("UpCCSD", "UpCCGSD-restricted"):
        pairs = doubles if variant == "UpCCSD" else _all_double_pairs(diag)
        for p, q in pairs:
            for spin in (0, 1):
                gens.append(make_single(p, q, spin, n_spatial))

    return Ansatz(
        generators=tuple(gens),
        n_qubits=2 * n_spatial,
        reference=tuple(range(2 * len(space.occupied))),
        name=f"PNO-{variant}",
        pair_structure={i: tuple(v) for i, v in diag.items()},
    )


def _all_double_pairs(diag: dict) -> list:
    pairs = []
    for i in sorted(diag):
        for a in diag[i]:
            pairs.append((i, a))
    for i in sorted(diag):
        orbs = diag[i]
        for m, a in enumerate(orbs):
            for b in orbs[m + 1 :]:
                pairs.append((a, b))
    return pairs


@dataclass(frozen=True)
class ResourceReport:
    """Parameter and naive CNOT counts for one ansatz."""

    n_parameters: int
    n_cnots: int
    breakdown: tuple   # ((generator label, cnots), ...)

    def as_dict(self) -> dict:
        return {
            "n_parameters": self.n_parameters,
            "n_cnots": self.n_cnots,
            "breakdown": [list(entry) for entry in self.breakdown],
        }


def count_resources(ansatz: Ansatz) -> ResourceReport:
    """Naive CNOT-ladder costing: 2(w - 1) CNOTs per weight-w rotation.

    No cancellation between adjacent rotations is assumed, so a pair double
    always costs 8 * 2 * 3 = 48 CNOTs and a single (p, q) costs 8(q - p)
    per spin channel.
    """
    breakdown = []
    total = 0
    for gen in ansatz.generators:
        cost = sum(2 * (string.weight - 1) for string, _ in gen.strings)
        breakdown.append((gen.label, cost))
        total += cost
    return ResourceReport(
        n_parameters=ansatz.n_parameters,
        n_cnots=total,
        breakdown=tuple(breakdown),
    )


def format_resource_table(rows: list) -> str:
    """Text table of ``params (cnots)`` cells.

    ``rows`` holds (system label, {variant name: ResourceReport}) pairs;
    columns are the union of variant names in first-seen order.
    """
    variants: list = []
    for _, reports in rows:
        for name in reports:
            if name not in variants:
                variants.append(name)
    header = ["System"] + variants
    table = [header]
    for label, reports in rows:
        row = [label]
        for name in variants:
            rep = reports.get(name)
            row.append(f"{rep.n_parameters} ({rep.n_cnots})" if rep else "-")
        table.append(row)
    widths = [max(len(r[c]) for r in table) for c in range(len(header))]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
        for row in table
    ]
    return "\n".join(lines) + "\n"


def resource_table_json(rows: list) -> str:
    payload = [
        {
            "system": label,
            "variants": {name: rep.as_dict() for name, rep in reports.items()},
        }
        for label, reports in rows
    ]
    return json.dumps(payload, indent=2, sort_keys=True)
