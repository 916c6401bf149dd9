"""Dissociation curve of H2: pair coupled-cluster VQE against exact energies.

Runs the full pipeline at ten bond lengths on the built-in minimal basis and
prints the curve. For a two-electron system the UpCCGSD circuit is exact, so
the VQE column reproduces the exact diagonalization column to optimizer
precision at every point.
"""

import numpy as np

import pnovqe as pq

config = pq.RunConfig(
    xyz="H 0 0 0; H 0 0 {R}",
    n_qubits=4,
    ansatz="upccgsd",
    scan=tuple(np.round(np.linspace(0.5, 2.3, 10), 4)),
).validate()

curve = pq.run_curve(config)

print(f"{'R (angstrom)':>12} {'E_VQE':>16} {'E_FCI':>16} {'error':>10}")
for point in curve.points:
    print(
        f"{point['coordinate']:>12.4f} {point['e_vqe']:>16.10f} "
        f"{point['e_fci']:>16.10f} {point['error_vs_fci']:>10.1e}"
    )

energies = [p["e_vqe"] for p in curve.points]
coords = [p["coordinate"] for p in curve.points]
print(f"\nminimum near R = {coords[int(np.argmin(energies))]:.2f} angstrom")
errors = [p["error_vs_fci"] for p in curve.points]
print(f"non-parallelity error of VQE vs exact: {pq.npe(errors):.2e} hartree")
