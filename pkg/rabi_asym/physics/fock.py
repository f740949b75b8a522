"""
Truncated spin x Fock basis, bosonic ladder operators, displacement
operators and the shifted number states |n>_sigma = U(sigma g) |n>.

Flat index layout: spin_block * (n_max + 1) + n, spin block 0 is the
up spin (lab frame) or tau = + (rotated frame).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import linalg, special

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import DomainError, TruncationError
from rabi_asym.models import ModelParams, StateLabel

logger = logging.getLogger(__name__)

# Padding in standard deviations of the displaced Gaussian envelope
_PAD_SIGMAS = 8.0


@dataclass(frozen=True)
class TruncatedFockBasis:
    """Two spin blocks of n_max + 1 Fock levels each"""
    n_max: int

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 2 * self.levels

    def index(self, spin_block: int, n: int) -> int:
        if spin_block not in (0, 1) or not 0 <= n <= self.n_max:
            raise DomainError(f"({spin_block}, {n}) outside basis with n_max={self.n_max}")
        return spin_block * self.levels + n

    def split(self, index: int) -> Tuple[int, int]:
        if not 0 <= index < self.dim:
            raise DomainError(f"index {index} outside 0..{self.dim - 1}")
        return divmod(index, self.levels)

    def annihilation(self) -> np.ndarray:
        return annihilation(self.levels)

    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.levels, dtype=float))

    def embed(self, spin_op: np.ndarray, boson_op: np.ndarray) -> np.ndarray:
        """spin_op (x) boson_op in the block layout"""
        return np.kron(spin_op, boson_op)


def build_basis(n_max: int) -> TruncatedFockBasis:
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    return TruncatedFockBasis(n_max=int(n_max))


def annihilation(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1)


def padded_levels(levels: int, shift: float) -> int:
    return max(levels, int(math.ceil((math.sqrt(levels) + abs(shift) + _PAD_SIGMAS) ** 2)))


def displacement_extended(shift: float, levels: int) -> np.ndarray:
    """U(shift) = exp(shift (a - a')) on a padded basis, not cropped.

    Cached per (shift, levels); the returned array is read-only.
    """
    return _displacement_cached(float(shift), int(levels))


@lru_cache(maxsize=8)
def _displacement_cached(shift: float, levels: int) -> np.ndarray:
    a = annihilation(padded_levels(levels, shift))
    U = linalg.expm(shift * (a - a.T))
    U.setflags(write=False)
    return U


def retained_levels(U: np.ndarray) -> int:
    """Number of leading columns of a cropped U that are still unit vectors within ortho_tol"""
    tol = get_settings().ORTHO_TOL
    norms = np.sum(U * U, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    return int(bad[0]) if bad.size else U.shape[1]


def displacement_operator(shift: float, b: TruncatedFockBasis) -> np.ndarray:
    """Oscillator block of U(shift) = exp(shift (a - a')) on the first n_max + 1 levels.

    The exponential is taken on a padded basis and cropped, so that the
    retained columns are those of the untruncated operator.

    Raises:
        TruncationError: not even the vacuum column stays normalized
    """
    if shift == 0:
        return np.eye(b.levels)
    U = displacement_extended(shift, b.levels)[: b.levels, : b.levels].copy()
    kept = retained_levels(U)
    if kept == 0:
        raise TruncationError(b.n_max, f"displacement by {shift} leaves no orthonormal columns")
    logger.debug(f"U({shift}) on n_max={b.n_max}: {kept} orthonormal columns")
    return U


def _check_tail(state: np.ndarray, n_max: int, what: str) -> None:
    top = max(1, int(math.ceil(0.05 * state.size)))
    tail = float(np.sum(state[-top:] ** 2))
    if tail > get_settings().TAIL_TOL:
        raise TruncationError(n_max, f"{what} carries weight {tail:.3e} in the top {top} levels")


def shifted_number_state(n: int, sigma: int, p: ModelParams, b: TruncatedFockBasis) -> np.ndarray:
    """Oscillator amplitudes of |n>_sigma, the eigenstate of (a + sigma g)'(a + sigma g).

    Raises:
        TruncationError: the state's Fock tail exceeds tail_tol
    """
    if sigma not in (1, -1):
        raise DomainError(f"sigma must be +1 or -1, got {sigma}")
    if not 0 <= n <= b.n_max:
        raise TruncationError(b.n_max, f"level n={n} outside the basis")
    shift = sigma * p.g_tilde
    if shift == 0:
        state = np.zeros(b.levels)
        state[n] = 1.0
        return state

    U = displacement_extended(shift, b.levels)
    state = U[: b.levels, n].copy()
    _check_tail(state, b.n_max, f"|{n}>_{'+' if sigma > 0 else '-'}")
    return state / np.linalg.norm(state)


def coherent_state(alpha: float, b: TruncatedFockBasis) -> np.ndarray:
    """e^{-alpha^2/2} alpha^k / sqrt(k!) for real alpha"""
    k = np.arange(b.levels, dtype=float)
    if alpha == 0:
        return (k == 0).astype(float)
    amp = np.exp(-0.5 * alpha * alpha - 0.5 * special.gammaln(k + 1) + k * math.log(abs(alpha)))
    return amp * np.where((alpha < 0) & (k % 2 == 1), -1.0, 1.0)


def expectation(state: np.ndarray, obs: np.ndarray, magnitude: bool = False) -> float:
    """<state|obs|state> for a real state.

    With magnitude=True the absolute value is returned, which is how the
    antisymmetric sigma_y generator is read out.
    """
    value = float(state @ obs @ state)
    return abs(value) if magnitude else value


def zeroth_order_state(label: StateLabel, p: ModelParams, b: TruncatedFockBasis) -> np.ndarray:
    """Unperturbed eigenstate in the rotated (tau) frame.

    sigma labels: |n>_sigma in block sigma.
    alpha labels: (0, |n>_-) for n < M, (|n-M>_+, alpha |n>_-)/sqrt(2) for n >= M.
    """
    state = np.zeros(b.dim)
    if label.kind == "sigma":
        block = 0 if label.branch > 0 else 1
        start = block * b.levels
        state[start:start + b.levels] = shifted_number_state(label.n, label.branch, p, b)
        return state

    M = p.integer_M()
    if label.n < M:
        if label.branch != 0:
            raise DomainError(f"n={label.n} < M={M} requires alpha=0")
        state[b.levels:] = shifted_number_state(label.n, -1, p, b)
        return state

    if label.branch not in (1, -1):
        raise DomainError(f"n={label.n} >= M={M} requires alpha=+1 or -1")
    state[: b.levels] = shifted_number_state(label.n - M, 1, p, b)
    state[b.levels:] = label.branch * shifted_number_state(label.n, -1, p, b)
    return state / math.sqrt(2.0)
