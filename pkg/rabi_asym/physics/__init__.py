from rabi_asym.physics.eigensolver import Eigensystem, converged_spectrum, eigh
from rabi_asym.physics.fock import TruncatedFockBasis, build_basis
from rabi_asym.physics.hamiltonian import build_arm_hamiltonian, build_rotated_hamiltonian, observable_matrix
from rabi_asym.physics.perturbation import pt_integer, pt_noninteger, validity
from rabi_asym.physics.spectral_graph import SpectralGraph, detect_degeneracies, sweep

__all__ = [
    "Eigensystem",
    "SpectralGraph",
    "TruncatedFockBasis",
    "build_arm_hamiltonian",
    "build_basis",
    "build_rotated_hamiltonian",
    "converged_spectrum",
    "detect_degeneracies",
    "eigh",
    "observable_matrix",
    "pt_integer",
    "pt_noninteger",
    "sweep",
    "validity",
]
