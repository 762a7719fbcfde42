"""Thermal entanglement witness for the half-filled Hubbard model."""

from ._core import (
    ClusterGeometry,
    apply_hop,
    build_lattice,
    eigenvalues,
    enumerate_sector,
    eta,
    extrapolate_thermodynamic,
    find_tc,
    free_fermion_reference,
    hs_coupling,
    run_qmc,
    sector_hamiltonian,
    tc_vs_u,
    thermal_observables,
)

__all__ = [
    "ClusterGeometry",
    "apply_hop",
    "build_lattice",
    "eigenvalues",
    "enumerate_sector",
    "eta",
    "extrapolate_thermodynamic",
    "find_tc",
    "free_fermion_reference",
    "hs_coupling",
    "run_qmc",
    "sector_hamiltonian",
    "tc_vs_u",
    "thermal_observables",
]
