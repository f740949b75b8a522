"""Asymmetric quantum Rabi model: exact diagonalization, perturbation theory in Delta, parent Hamiltonian"""
__version__ = "0.1.0"
