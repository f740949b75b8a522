"""
Hamiltonian and observable matrices in the truncated spin x Fock basis.

Lab frame (sigma_z eigenbasis, block 0 = up):
    H = w a'a + g (a' + a) sx + eps sx + Delta sz
Rotated frame (sigma_x eigenbasis, block 0 = tau +):
    h_sigma = w (a'a + sigma g~ (a + a') + g~^2) + sigma eps,  V = Delta tau_x
so the rotated spectrum is the lab spectrum shifted by g^2/w.
"""
from typing import Literal

import numpy as np

from rabi_asym.core.errors import DomainError
from rabi_asym.models import ModelParams
from rabi_asym.physics.fock import TruncatedFockBasis

Frame = Literal["lab", "rotated"]
ObservableName = Literal["sx", "sy_magnitude_check", "sz", "number", "parity"]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# sigma_y = -i J; real states give <J> = 0 identically
SIGMA_Y_GENERATOR = np.array([[0.0, 1.0], [-1.0, 0.0]])
SPIN_IDENTITY = np.eye(2)


def _position(b: TruncatedFockBasis) -> np.ndarray:
    a = b.annihilation()
    return a + a.T


def build_arm_hamiltonian(p: ModelParams, b: TruncatedFockBasis) -> np.ndarray:
    """Lab-frame matrix of the asymmetric Rabi Hamiltonian"""
    boson_id = np.eye(b.levels)
    H = p.omega * b.embed(SPIN_IDENTITY, b.number())
    H += p.g * b.embed(SIGMA_X, _position(b))
    H += p.epsilon * b.embed(SIGMA_X, boson_id)
    H += p.delta * b.embed(SIGMA_Z, boson_id)
    return H


def build_unperturbed_rotated(p: ModelParams, b: TruncatedFockBasis) -> np.ndarray:
    """Block-diagonal H0 = diag(h_+, h_-) of the rotated frame"""
    boson_id = np.eye(b.levels)
    g = p.g_tilde
    H0 = p.omega * b.embed(SPIN_IDENTITY, b.number() + g * g * boson_id)
    H0 += p.omega * g * b.embed(SIGMA_Z, _position(b))
    H0 += p.epsilon * b.embed(SIGMA_Z, boson_id)
    return H0


def build_rotated_hamiltonian(p: ModelParams, b: TruncatedFockBasis) -> np.ndarray:
    """H0 + Delta tau_x, the Hamiltonian with shifted oscillators and the g^2/w constant kept"""
    return build_unperturbed_rotated(p, b) + p.delta * b.embed(SIGMA_X, np.eye(b.levels))


def observable_matrix(which: ObservableName, b: TruncatedFockBasis, frame: Frame = "lab") -> np.ndarray:
    """Observable in the block layout of `b`.

    The rotated frame exchanges sigma_x and sigma_z and flips sigma_y; the
    oscillator operators are shared by both frames. `sy_magnitude_check`
    is the real antisymmetric J with sigma_y = -iJ.
    """
    if frame not in ("lab", "rotated"):
        raise DomainError(f"unknown frame {frame!r}")
    rotated = frame == "rotated"
    boson_id = np.eye(b.levels)

    if which == "sx":
        return b.embed(SIGMA_Z if rotated else SIGMA_X, boson_id)
    if which == "sz":
        return b.embed(SIGMA_X if rotated else SIGMA_Z, boson_id)
    if which == "sy_magnitude_check":
        return b.embed(-SIGMA_Y_GENERATOR if rotated else SIGMA_Y_GENERATOR, boson_id)
    if which == "number":
        return b.embed(SPIN_IDENTITY, b.number())
    if which == "parity":
        bosonic_parity = np.diag((-1.0) ** np.arange(b.levels))
        return b.embed(SIGMA_X if rotated else SIGMA_Z, bosonic_parity)
    raise DomainError(f"unknown observable {which!r}")
