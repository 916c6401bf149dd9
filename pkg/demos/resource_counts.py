"""Parameter and CNOT counts: pair-structured circuits versus full UpCCGSD.

The pair-assignment structure of the selected natural orbitals restricts
which excitations an ansatz needs. The table below compares the
PNO-restricted doubles (and doubles+singles) circuits against the full
UpCCGSD circuit on the same register, under a naive CNOT-ladder costing of
2(w-1) CNOTs per weight-w Pauli rotation.
"""

import numpy as np

import pnovqe as pq
from pnovqe.pno import OrbitalSpace


def space_with(n_occ, assignment):
    n_total = n_occ + len(assignment)
    return OrbitalSpace(
        n_total=n_total,
        occupied=tuple(range(n_occ)),
        pno_assignment=dict(assignment),
        transform=np.eye(n_total),
    )


# pair structures for three representative 12- and 22-qubit spaces
systems = [
    ("LiH-like (4e,12q)", 4, space_with(2, {a: (1, 1) for a in (2, 3, 4, 5)})),
    ("BH-like (6e,12q)", 6, space_with(3, {3: (0, 0), 4: (1, 1), 5: (2, 2)})),
    ("LiH-like (4e,22q)", 4, space_with(2, {a: (1, 1) for a in range(2, 11)})),
]

rows = []
for label, n_elec, space in systems:
    reports = {}
    for variant in ("UpCCD", "UpCCSD"):
        ansatz = pq.build_pno_ansatz(space, variant)
        reports[ansatz.name] = pq.count_resources(ansatz)
    full = pq.build_upccgsd(space.n_total, n_elec)
    reports[full.name] = pq.count_resources(full)
    rows.append((label, reports))

print("parameters (CNOTs), naive non-optimized decomposition\n")
print(pq.format_resource_table(rows))

report = pq.count_resources(pq.build_pno_ansatz(systems[0][2], "UpCCD"))
print("per-generator breakdown for the first row, PNO-UpCCD:")
for label, cnots in report.breakdown:
    print(f"  {label:>10}  {cnots} CNOTs")
