"""Pipelines from molecule or FCIDUMP to VQE numbers, plus error metrics.

A run proceeds integrals -> SCF -> MP2 pair densities -> budgeted PNO
selection -> compact Hamiltonian -> Jordan-Wigner -> ansatz -> VQE, with an
exact-diagonalization energy of the same compact basis attached to every
point. PNO selection is redone independently at every scan geometry, so the
orbital set adapts to each point; the per-point selection signature is
recorded to make curve kinks diagnosable.

Serialized outputs (one JSON document per run, one CSV per curve) contain
no wall-clock data, so identical configurations reproduce byte-identical
files when run serially.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import (
    build_pno_ansatz,
    build_upccgsd,
    count_resources,
    format_resource_table,
)
from .exact import exact_ground_energy, sector_basis
from .integrals import (
    IntegralSet,
    parse_xyz,
    read_fcidump,
    sto3g_shells,
    write_fcidump,
    compute_ao_integrals,
    HARTREE_TO_KCALMOL,
)
from .operators import build_hamiltonian, jordan_wigner
from .optimize import run_vqe
from .pno import (
    build_final_integrals,
    freeze_core,
    mp2_amplitudes,
    orthonormalize,
    pair_densities,
    select_pnos,
)
from .scf import run_rhf, transform_to_mo

ANSATZ_CHOICES = ("upccgsd", "pno-upccd", "pno-upccsd", "pno-upccgd")
_VARIANT_MAP = {
    "pno-upccd": "UpCCD",
    "pno-upccsd": "UpCCSD",
    "pno-upccgd": "UpCCGD",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Everything one run needs; see the README for the file schema."""

    integral_source: str = "builtin-sto3g"
    xyz: str | None = None            # inline template, atoms split by ";"
    xyz_file: str | None = None
    charge: int = 0
    fcidump: str | None = None        # path template for the fcidump source
    n_qubits: int = 4
    ansatz: str = "upccgsd"
    layers: int = 1
    diagonal_only: bool = False
    freeze: tuple = ()
    occupation_threshold: float | None = None
    grad_tol: float = 1e-6
    max_iter: int = 500
    restarts: int = 0
    gradient_method: str = "adjoint"
    scan: tuple = ()
    output_dir: str | None = None
    workers: int = 1
    seed: int = 0
    reference_file: str | None = None
    metadata: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        self.scan = tuple(float(v) for v in self.scan)
        self.freeze = tuple(int(v) for v in self.freeze)
        self.n_qubits = int(self.n_qubits)
        if self.n_qubits % 2 != 0:
            raise ConfigError("qubit budget must be even")
        if self.integral_source not in ("builtin-sto3g", "fcidump"):
            raise ConfigError(f"unknown integral source {self.integral_source!r}")
        if self.integral_source == "fcidump":
            if not self.fcidump:
                raise ConfigError("fcidump source needs a path")
            if self.xyz or self.xyz_file:
                raise ConfigError("exactly one integral source: remove the geometry")
        else:
            if not (self.xyz or self.xyz_file):
                raise ConfigError("builtin source needs xyz or xyz_file")
            if self.xyz and self.xyz_file:
                raise ConfigError("give either inline xyz or xyz_file, not both")
        if self.ansatz not in ANSATZ_CHOICES:
            raise ConfigError(f"unknown ansatz {self.ansatz!r}")
        if self.scan and any(
            b <= a for a, b in zip(self.scan, self.scan[1:])
        ):
            raise ConfigError("scan values must be strictly increasing")
        if self.scan:
            if self.integral_source == "fcidump" and "{R}" not in self.fcidump:
                raise ConfigError("scan over fcidump source needs {R} in the path")
            if self.xyz and "{R}" not in self.xyz:
                raise ConfigError("scan needs a {R} placeholder in the geometry")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def to_dict(self) -> dict:
        data = asdict(self)
        data["freeze"] = list(self.freeze)
        data["scan"] = list(self.scan)
        return data

    def hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode()
        ).hexdigest()[:16]


_SCHEMA = {
    "molecule": {"xyz", "xyz_file", "charge"},
    "integrals": {"source", "fcidump"},
    "space": {"nq", "diagonal_only", "freeze", "occupation_threshold"},
    "ansatz": {"variant", "layers"},
    "optimizer": {"grad_tol", "max_iter", "restarts", "gradient_method"},
    "scan": {"values"},
    "output": {"directory", "workers", "seed"},
    "reference": {"file"},
    "metadata": None,  # free-form, echoed into outputs
}


def parse_config(text: str) -> RunConfig:
    """Parse the sectioned key-value config format; unknown keys are errors."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SCHEMA:
                raise ConfigError(f"unknown section [{current}] at line {lineno}")
            sections.setdefault(current, {})
            continue
        if "=" not in line or current is None:
            raise ConfigError(f"expected 'key = value' inside a section at line {lineno}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        allowed = _SCHEMA[current]
        if allowed is not None and key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section [{current}] at line {lineno}")
        sections[current][key] = value

    cfg = RunConfig()
    mol = sections.get("molecule", {})
    cfg.xyz = mol.get("xyz")
    cfg.xyz_file = mol.get("xyz_file")
    cfg.charge = int(mol.get("charge", 0))
    ints = sections.get("integrals", {})
    cfg.integral_source = ints.get("source", cfg.integral_source)
    cfg.fcidump = ints.get("fcidump")
    space = sections.get("space", {})
    cfg.n_qubits = int(space.get("nq", cfg.n_qubits))
    cfg.diagonal_only = _as_bool(space.get("diagonal_only", "false"))
    cfg.freeze = tuple(int(v) for v in space.get("freeze", "").split())
    if "occupation_threshold" in space:
        cfg.occupation_threshold = float(space["occupation_threshold"])
    ans = sections.get("ansatz", {})
    cfg.ansatz = ans.get("variant", cfg.ansatz)
    cfg.layers = int(ans.get("layers", 1))
    opt = sections.get("optimizer", {})
    cfg.grad_tol = float(opt.get("grad_tol", cfg.grad_tol))
    cfg.max_iter = int(opt.get("max_iter", cfg.max_iter))
    cfg.restarts = int(opt.get("restarts", cfg.restarts))
    cfg.gradient_method = opt.get("gradient_method", cfg.gradient_method)
    scan = sections.get("scan", {})
    cfg.scan = tuple(float(v) for v in scan.get("values", "").split())
    out = sections.get("output", {})
    cfg.output_dir = out.get("directory")
    cfg.workers = int(out.get("workers", 1))
    cfg.seed = int(out.get("seed", 0))
    ref = sections.get("reference", {})
    cfg.reference_file = ref.get("file")
    cfg.metadata = dict(sections.get("metadata", {}))
    return cfg.validate()


def _as_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


# ---------------------------------------------------------------------------
# Pipeline stages


def _inline_to_xyz(inline: str) -> str:
    atoms = [a.strip() for a in inline.split(";") if a.strip()]
    return f"{len(atoms)}\ninline geometry\n" + "\n".join(atoms)


def _substitute(template: str, coordinate) -> str:
    if "{R}" in template:
        if coordinate is None:
            raise ConfigError("geometry template has a {R} placeholder but no scan value")
        return template.replace("{R}", repr(float(coordinate)))
    return template


def molecular_integrals(config: RunConfig, coordinate=None):
    """Stage 1: produce the canonical MO IntegralSet for one geometry."""
    if config.integral_source == "fcidump":
        path = _substitute(config.fcidump, coordinate)
        return read_fcidump(path), None
    if config.xyz_file:
        text = Path(_substitute(config.xyz_file, coordinate)).read_text()
        text = _substitute(text, coordinate)
    else:
        text = _inline_to_xyz(_substitute(config.xyz, coordinate))
    molecule = parse_xyz(text, charge=config.charge)
    ao = compute_ao_integrals(molecule, sto3g_shells(molecule))
    scf = run_rhf(ao, molecule.n_electrons)
    if not scf.converged:
        raise RuntimeError("SCF did not converge")
    mo = transform_to_mo(ao, scf.mo_coefficients, molecule.n_electrons,
                         orbital_energies=scf.orbital_energies)
    return mo, scf


def reference_energy(mo: IntegralSet) -> float:
    """Closed-shell single-determinant energy of the first n_occ orbitals."""
    occ = range(mo.n_occ)
    energy = mo.core_energy
    for i in occ:
        energy += 2.0 * mo.h[i, i]
        for j in occ:
            energy += 2.0 * mo.g[i, j, i, j] - mo.g[i, j, j, i]
    return float(energy)


def compact_hamiltonian(config: RunConfig, coordinate=None):
    """Stages 1-4: integrals, MP2/PNO truncation, Jordan-Wigner encoding.

    Returns a dict with the intermediate artifacts needed downstream.
    """
    mo, scf = molecular_integrals(config, coordinate)
    if config.freeze:
        mo = freeze_core(mo, list(config.freeze))
    amps = mp2_amplitudes(mo)
    densities = pair_densities(amps)
    pnos = select_pnos(
        densities,
        config.n_qubits,
        diagonal_only=config.diagonal_only,
        occupation_threshold=config.occupation_threshold,
    )
    space = orthonormalize(pnos)
    final = build_final_integrals(mo, space)
    qubit_h = jordan_wigner(build_hamiltonian(final), config.n_qubits)
    signature = [f"{i}.{j}#{local}" for (i, j), local, _ in pnos.selection]
    return {
        "mo": mo,
        "scf": scf,
        "amplitudes": amps,
        "pnos": pnos,
        "space": space,
        "final": final,
        "hamiltonian": qubit_h,
        "e_hf": reference_energy(mo),
        "e_mp2": reference_energy(mo) + amps.mp2_total,
        "selection_signature": signature,
    }


def build_ansatz_for(config: RunConfig, stage: dict):
    if config.ansatz == "upccgsd":
        final = stage["final"]
        return build_upccgsd(final.n_orb, final.n_electrons, layers=config.layers)
    return build_pno_ansatz(stage["space"], _VARIANT_MAP[config.ansatz])


def run_point(config: RunConfig, coordinate=None) -> dict:
    """Full single-point pipeline; returns a JSON-ready record."""
    config.validate()
    stage = compact_hamiltonian(config, coordinate)
    ansatz = build_ansatz_for(config, stage)
    resources = count_resources(ansatz)
    hamiltonian = stage["hamiltonian"]
    final = stage["final"]
    vqe = run_vqe(
        hamiltonian,
        ansatz,
        grad_tol=config.grad_tol,
        max_iter=config.max_iter,
        gradient_method=config.gradient_method,
        restarts=config.restarts,
        seed=config.seed,
    )
    sector = sector_basis(config.n_qubits, final.n_electrons, two_sz=0)
    e_fci, _ = exact_ground_energy(hamiltonian, sector)
    if vqe.fun < e_fci - 1e-9:
        raise RuntimeError("variational bound violated: VQE below FCI")
    record = {
        "coordinate": None if coordinate is None else float(coordinate),
        "e_vqe": vqe.fun,
        "e_fci": e_fci,
        "e_hf": stage["e_hf"],
        "e_mp2": stage["e_mp2"],
        "error_vs_fci": vqe.fun - e_fci,
        "n_qubits": config.n_qubits,
        "n_electrons": final.n_electrons,
        "ansatz": ansatz.name,
        "n_parameters": resources.n_parameters,
        "n_cnots": resources.n_cnots,
        "selection_signature": stage["selection_signature"],
        "optimizer": {
            "converged": vqe.converged,
            "iterations": vqe.iterations,
            "grad_norm": vqe.grad_norm,
            "n_function_evals": vqe.n_function_evals,
            "n_gradient_evals": vqe.n_gradient_evals,
        },
    }
    if config.output_dir:
        _write_point_artifacts(config, coordinate, stage, vqe, resources)
    return record


def _point_tag(coordinate) -> str:
    return "point" if coordinate is None else f"r{coordinate:.6f}"


def _write_point_artifacts(config, coordinate, stage, vqe, resources) -> None:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    tag = _point_tag(coordinate)
    write_fcidump(stage["final"], out / f"{tag}.fcidump")
    (out / f"{tag}.hamiltonian.txt").write_text(stage["hamiltonian"].to_text())
    (out / f"{tag}.resources.json").write_text(
        json.dumps(resources.as_dict(), indent=2, sort_keys=True) + "\n"
    )
    rows = ["iteration,energy,grad_norm"]
    for it, (energy, gnorm) in enumerate(vqe.trajectory):
        rows.append(f"{it},{energy!r},{gnorm!r}")
    (out / f"{tag}.trajectory.csv").write_text("\n".join(rows) + "\n")


def _point_worker(payload):
    config_dict, coordinate = payload
    config = RunConfig(**config_dict)
    try:
        return run_point(config, coordinate)
    except Exception as exc:  # per-point failures keep the curve going
        return {"coordinate": coordinate, "error": f"{type(exc).__name__}: {exc}"}


@dataclass(frozen=True)
class CurveResult:
    points: tuple
    metadata: dict
    failures: int

    def coordinates(self):
        return [p["coordinate"] for p in self.points if "error" not in p]

    def errors_vs(self, reference: dict, column: str = "e_vqe"):
        out = []
        for p in self.points:
            if "error" in p:
                continue
            ref = _lookup_coordinate(reference, p["coordinate"])
            out.append(p[column] - ref)
        return out


def run_curve(config: RunConfig) -> CurveResult:
    """Independent run_point per scan value; failures are recorded per point."""
    config.validate()
    coordinates = list(config.scan) if config.scan else [None]
    payloads = [(config.to_dict(), c) for c in coordinates]
    if config.workers > 1 and len(payloads) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(_point_worker, payloads))
    else:
        points = [_point_worker(p) for p in payloads]
    failures = sum(1 for p in points if "error" in p)
    metadata = {
        "config_hash": config.hash(),
        "ansatz": config.ansatz,
        "n_qubits": config.n_qubits,
        "package_version": __version__,
        "extra": dict(config.metadata),
    }
    result = CurveResult(points=tuple(points), metadata=metadata, failures=failures)
    if config.output_dir:
        write_outputs(config, result)
    return result


def write_outputs(config: RunConfig, result: CurveResult) -> None:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    document = {
        "config": config.to_dict(),
        "metadata": result.metadata,
        "points": list(result.points),
    }
    (out / "run.json").write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")
    reference = (
        load_reference(config.reference_file) if config.reference_file else None
    )
    header = "coordinate,e_vqe,e_fci,error_vs_fci"
    if reference is not None:
        header += ",e_reference,error_vs_reference"
    rows = [header]
    for p in result.points:
        if "error" in p:
            continue
        coord = p["coordinate"]
        row = f"{coord!r},{p['e_vqe']!r},{p['e_fci']!r},{p['error_vs_fci']!r}"
        if reference is not None:
            ref = _lookup_coordinate(reference, coord)
            row += f",{ref!r},{p['e_vqe'] - ref!r}"
        rows.append(row)
    (out / "curve.csv").write_text("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# Error metrics


def npe(errors) -> float:
    """Non-parallelity error: max - min of the pointwise errors."""
    errors = list(errors)
    if not errors:
        raise ValueError("npe of an empty error list")
    return float(max(errors) - min(errors))


def max_error(errors) -> float:
    errors = list(errors)
    if not errors:
        raise ValueError("max_error of an empty error list")
    return float(max(abs(e) for e in errors))


def barrier(e_transition: float, e_equilibrium: float) -> float:
    """Activation energy in hartree (callers may convert to kcal/mol)."""
    if not (np.isfinite(e_transition) and np.isfinite(e_equilibrium)):
        raise ValueError("barrier needs finite energies")
    return float(e_transition - e_equilibrium)


def barrier_kcal(e_transition: float, e_equilibrium: float) -> float:
    return barrier(e_transition, e_equilibrium) * HARTREE_TO_KCALMOL


def load_reference(path) -> dict:
    """Read (coordinate, energy) rows from whitespace- or comma-separated text."""
    table: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line[0].isalpha():
            continue
        fields = line.replace(",", " ").split()
        if len(fields) < 2:
            raise ValueError(f"malformed reference row: {raw!r}")
        table[float(fields[0])] = float(fields[1])
    if not table:
        raise ValueError(f"no reference rows found in {path}")
    return table


def _lookup_coordinate(table: dict, coordinate, tol: float = 1e-9) -> float:
    for key, value in table.items():
        if coordinate is not None and abs(key - coordinate) <= tol:
            return value
    raise KeyError(f"no reference energy for coordinate {coordinate}")


def load_curve_csv(path, column: str = "e_vqe") -> dict:
    """Read one column of a curve CSV keyed by coordinate."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    if column not in header:
        raise ValueError(f"column {column!r} not in {path}")
    idx = header.index(column)
    table: dict = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        fields = line.split(",")
        table[float(fields[0])] = float(fields[idx])
    return table


def resource_rows_for(config: RunConfig, label: str | None = None) -> list:
    """(system label, {variant: ResourceReport}) rows for the configured run."""
    stage = compact_hamiltonian(config, config.scan[0] if config.scan else None)
    final = stage["final"]
    reports = {}
    for name in ANSATZ_CHOICES:
        probe = RunConfig(**{**config.to_dict(), "ansatz": name})
        ans = build_ansatz_for(probe, stage)
        reports[ans.name] = count_resources(ans)
    system = label or f"system({final.n_electrons},{config.n_qubits})"
    return [(system, reports)]


def resource_table_for(config: RunConfig, label: str | None = None) -> str:
    """Text resource table for the configured system (all ansatz variants)."""
    return format_resource_table(resource_rows_for(config, label))
