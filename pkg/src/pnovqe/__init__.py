"""Compact qubit Hamiltonians from MP2 pair natural orbitals, with VQE.

The pipeline: molecular integrals (built-in s-Gaussian engine or FCIDUMP)
-> restricted Hartree-Fock -> MP2 pair densities -> globally ranked PNO
selection under a qubit budget -> Cholesky orthonormalization -> compact
second-quantized Hamiltonian -> Jordan-Wigner encoding -> pair
coupled-cluster VQE on an exact statevector, checked against exact
diagonalization.
"""

__version__ = "0.1.0"

from .integrals import (
    ANGSTROM_TO_BOHR,
    HARTREE_TO_KCALMOL,
    AOIntegralSet,
    BasisShell,
    IntegralSet,
    Molecule,
    boys,
    compute_ao_integrals,
    even_tempered_shells,
    parse_xyz,
    read_fcidump,
    sto3g_shells,
    write_fcidump,
)
from .scf import SCFResult, run_rhf, transform_to_mo
from .pno import (
    OrbitalSpace,
    PairAmplitudes,
    PNOSet,
    build_final_integrals,
    freeze_core,
    mp2_amplitudes,
    orthonormalize,
    pair_densities,
    select_pnos,
)
from .operators import (
    FermionOperator,
    PauliString,
    QubitOperator,
    build_hamiltonian,
    commutator,
    jordan_wigner,
    number_operator,
    pauli_multiply,
    spin_z_operator,
)
from .ansatz import (
    Ansatz,
    ExcitationGenerator,
    ResourceReport,
    build_pno_ansatz,
    build_upccgsd,
    count_resources,
    format_resource_table,
    make_pair_double,
    make_single,
)
from .simulator import (
    Statevector,
    ansatz_expectation,
    ansatz_state,
    apply_ansatz,
    apply_pauli_rotation,
    expectation,
    gradient,
    prepare_reference,
)
from .optimize import OptimizationResult, minimize, run_vqe
from .exact import (
    SectorBasis,
    build_paired_ansatz,
    build_paired_hamiltonian,
    exact_ground_energy,
    make_paired_rotation,
    sector_basis,
)
from .workbench import (
    CurveResult,
    RunConfig,
    barrier,
    barrier_kcal,
    load_config,
    max_error,
    npe,
    parse_config,
    run_curve,
    run_point,
)
