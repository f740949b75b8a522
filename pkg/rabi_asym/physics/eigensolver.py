"""
Dense real-symmetric eigendecomposition and adaptive Fock truncation.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import linalg

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import ConvergenceError, DomainError
from rabi_asym.models import ModelParams
from rabi_asym.physics.fock import TruncatedFockBasis, build_basis
from rabi_asym.physics.hamiltonian import (
    Frame,
    build_arm_hamiltonian,
    build_rotated_hamiltonian,
    observable_matrix,
)

logger = logging.getLogger(__name__)


@dataclass
class ConvergenceReport:
    """Sequence of truncations tried by converged_spectrum"""
    tol: float
    n_max_sequence: List[int] = field(default_factory=list)
    changes: List[float] = field(default_factory=list)
    converged: bool = False

    def summary(self) -> str:
        steps = " -> ".join(str(n) for n in self.n_max_sequence)
        last = f"{self.changes[-1]:.3e}" if self.changes else "n/a"
        status = "converged" if self.converged else "not converged"
        return f"{status}; n_max {steps}; last change {last} (tol {self.tol:g})"


@dataclass
class Eigensystem:
    """Ascending eigenvalues with orthonormal eigenvector columns"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    params: Optional[ModelParams] = None
    n_max: Optional[int] = None
    frame: Frame = "lab"
    report: Optional[ConvergenceReport] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def basis(self) -> TruncatedFockBasis:
        if self.n_max is None:
            raise DomainError("eigensystem was not built on a Fock basis")
        return build_basis(self.n_max)

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]

    def residual_norms(self, m: np.ndarray) -> np.ndarray:
        """||m v_i - lambda_i v_i|| per eigenpair"""
        return np.linalg.norm(m @ self.eigenvectors - self.eigenvectors * self.eigenvalues, axis=0)


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so that each one's largest-magnitude entry is positive (first on ties)"""
    rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigh(
    m: np.ndarray,
    n_eigs: Optional[int] = None,
    params: Optional[ModelParams] = None,
    n_max: Optional[int] = None,
    frame: Frame = "lab",
) -> Eigensystem:
    """Full or lowest-n_eigs decomposition of a real symmetric matrix via LAPACK.

    Raises:
        DomainError: non-finite or non-symmetric input
        ConvergenceError: LAPACK failed to converge
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    scale = max(float(np.max(np.abs(m))), 1.0) if m.size else 1.0
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
        raise DomainError("matrix is not symmetric")

    subset = None
    if n_eigs is not None:
        if not 1 <= n_eigs <= m.shape[0]:
            raise DomainError(f"n_eigs={n_eigs} outside 1..{m.shape[0]}")
        subset = [0, n_eigs - 1]

    try:
        values, vectors = linalg.eigh(m, subset_by_index=subset, driver="evr")
    except linalg.LinAlgError as e:
        raise ConvergenceError(f"LAPACK eigh: {e}") from e

    return Eigensystem(
        eigenvalues=values,
        eigenvectors=fix_signs(vectors),
        params=params,
        n_max=n_max,
        frame=frame,
    )


def default_n_max(p: ModelParams) -> int:
    """ceil((2 g~ + 6)^2) + 20, enough for the displaced oscillators around n ~ g~^2"""
    return int(math.ceil((2.0 * p.g_tilde + 6.0) ** 2)) + 20


def hamiltonian(p: ModelParams, b: TruncatedFockBasis, frame: Frame = "lab") -> np.ndarray:
    if frame == "lab":
        return build_arm_hamiltonian(p, b)
    if frame == "rotated":
        return build_rotated_hamiltonian(p, b)
    raise DomainError(f"unknown frame {frame!r}")


def parity_resolved_eigh(
    m: np.ndarray,
    b: TruncatedFockBasis,
    n_eigs: Optional[int] = None,
    params: Optional[ModelParams] = None,
) -> Eigensystem:
    """Lab-frame decomposition of a parity-conserving matrix, one sector at a time.

    Every eigenvector lies in a single sector of sigma_z (-1)^N, so
    parity-odd observables vanish exactly even for levels closer than the
    solver accuracy.
    """
    parity = np.diag(observable_matrix("parity", b))
    values, vectors = [], []
    for sector in (np.flatnonzero(parity > 0), np.flatnonzero(parity < 0)):
        block = m[np.ix_(sector, sector)]
        count = None if n_eigs is None else min(n_eigs, sector.size)
        part = eigh(block, n_eigs=count)
        embedded = np.zeros((b.dim, len(part)))
        embedded[sector] = part.eigenvectors
        values.append(part.eigenvalues)
        vectors.append(embedded)

    values = np.concatenate(values)
    vectors = np.hstack(vectors)
    order = np.argsort(values, kind="stable")[:n_eigs]
    return Eigensystem(
        eigenvalues=values[order],
        eigenvectors=vectors[:, order],
        params=params,
        n_max=b.n_max,
        frame="lab",
    )


def spectrum_at(p: ModelParams, n_max: int, n_levels: Optional[int] = None, frame: Frame = "lab") -> Eigensystem:
    """Decomposition at a fixed truncation; epsilon = 0 in the lab frame goes through the parity sectors"""
    b = build_basis(n_max)
    n_eigs = None if n_levels is None else min(n_levels, b.dim)
    m = hamiltonian(p, b, frame)
    if frame == "lab" and p.epsilon == 0:
        return parity_resolved_eigh(m, b, n_eigs=n_eigs, params=p)
    return eigh(m, n_eigs=n_eigs, params=p, n_max=n_max, frame=frame)


def converged_spectrum(
    p: ModelParams,
    n_levels: int,
    tol: Optional[float] = None,
    frame: Frame = "lab",
    n_max_start: Optional[int] = None,
) -> Eigensystem:
    """Double n_max from the default until the lowest n_levels eigenvalues move less than tol.

    Returns the larger of the last two decompositions.

    Raises:
        ConvergenceError: n_max would exceed the NMAX_CAP setting
    """
    if n_levels < 1:
        raise DomainError(f"n_levels must be >= 1, got {n_levels}")
    settings = get_settings()
    tol = settings.CONVERGENCE_TOL if tol is None else tol
    report = ConvergenceReport(tol=tol)

    n_max = max(default_n_max(p), n_levels) if n_max_start is None else n_max_start
    if n_max + 1 > settings.NMAX_CAP:
        raise ConvergenceError(f"initial n_max={n_max} exceeds cap {settings.NMAX_CAP}")

    previous = spectrum_at(p, n_max, n_levels, frame)
    report.n_max_sequence.append(n_max)
    while True:
        n_max *= 2
        if n_max + 1 > settings.NMAX_CAP:
            raise ConvergenceError(
                f"lowest {n_levels} levels not stable before n_max cap {settings.NMAX_CAP}: {report.summary()}",
                iterations=len(report.n_max_sequence),
            )
        current = spectrum_at(p, n_max, n_levels, frame)
        change = float(np.max(np.abs(current.eigenvalues - previous.eigenvalues)))
        report.n_max_sequence.append(n_max)
        report.changes.append(change)
        logger.info(f"n_max={n_max}: lowest {n_levels} levels moved by {change:.3e}")
        if change < tol:
            report.converged = True
            current.report = report
            return current
        previous = current
