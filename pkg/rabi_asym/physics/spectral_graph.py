"""
Spectral graphs: level curves and spin/number observables across a g-sweep,
with eigenvector-overlap tracking and crossing detection.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import DomainError, TrackingBreak
from rabi_asym.models import ModelParams
from rabi_asym.physics.eigensolver import ConvergenceReport, converged_spectrum, spectrum_at
from rabi_asym.physics.fock import build_basis
from rabi_asym.physics.hamiltonian import observable_matrix
from rabi_asym.workers.pool import run_ordered

logger = logging.getLogger(__name__)

OBSERVABLES = ("sx", "sz", "number")


@dataclass
class SpectralGraph:
    """Tracked level curves; column c of every array is curve c"""
    params: ModelParams
    g_grid: np.ndarray
    n_max: int
    energies: np.ndarray
    sx: np.ndarray
    sz: np.ndarray
    nbar: np.ndarray
    sy_check: np.ndarray
    tracked_ok: np.ndarray
    breaks: List[TrackingBreak] = field(default_factory=list)
    report: Optional[ConvergenceReport] = None

    @property
    def n_levels(self) -> int:
        return self.energies.shape[1]

    def rows(self) -> List[Dict[str, float]]:
        """One record per (g, curve) in grid order"""
        out = []
        for i, g in enumerate(self.g_grid):
            for c in range(self.n_levels):
                out.append({
                    "g": float(g),
                    "level": c,
                    "energy": float(self.energies[i, c]),
                    "sx": float(self.sx[i, c]),
                    "sz": float(self.sz[i, c]),
                    "nbar": float(self.nbar[i, c]),
                    "tracked_ok": bool(self.tracked_ok[i, c]),
                })
        return out


@dataclass(frozen=True)
class Degeneracy:
    g: float
    curves: Tuple[int, int]
    gap: float
    index: int


def _diagonalize_point(payload: Tuple[dict, int, int]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lowest levels at one grid point: (energies, vectors, observable table)"""
    params, n_max, n_levels = payload
    system = spectrum_at(ModelParams(**params), n_max, n_levels)
    b = build_basis(n_max)
    V = system.eigenvectors
    table = np.empty((4, V.shape[1]))
    for row, name in enumerate(OBSERVABLES):
        obs = observable_matrix(name, b)
        table[row] = np.einsum("ij,ik,kj->j", V, obs, V)
    sy = observable_matrix("sy_magnitude_check", b)
    table[3] = np.abs(np.einsum("ij,ik,kj->j", V, sy, V))
    return system.eigenvalues, V, table


def match_levels(previous: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Assign current eigenvectors to previous curves by absolute overlap.

    Greedy best overlap per curve, falling back to a global assignment on
    1 - |overlap| when two candidates are within TRACK_AMBIGUITY or two
    curves claim the same vector. Returns (assignment, overlap per curve).
    """
    settings = get_settings()
    overlap = np.abs(previous.T @ current)
    order = np.argsort(-overlap, axis=1)
    greedy = order[:, 0]
    best = overlap[np.arange(len(greedy)), greedy]

    ambiguous = False
    if overlap.shape[1] > 1:
        second = overlap[np.arange(len(greedy)), order[:, 1]]
        ambiguous = bool(np.any(best - second < settings.TRACK_AMBIGUITY))
    conflict = len(set(greedy.tolist())) < len(greedy)

    if ambiguous or conflict:
        rows, cols = linear_sum_assignment(1.0 - overlap)
        assignment = np.empty(len(rows), dtype=int)
        assignment[rows] = cols
    else:
        assignment = greedy
    return assignment, overlap[np.arange(len(assignment)), assignment]


def sweep(
    p: ModelParams,
    g_grid: Sequence[float],
    n_levels: int,
    n_max: Optional[int] = None,
    jobs: Optional[int] = None,
) -> SpectralGraph:
    """Diagonalize along g at a fixed truncation and track the lowest n_levels.

    The truncation is the converged one at the largest g unless `n_max` is
    given. Tracking breaks are recorded, never raised.
    """
    grid = np.asarray(g_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("g grid must be a non-empty sequence")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("g grid must be strictly increasing")
    if n_levels < 1:
        raise DomainError(f"n_levels must be >= 1, got {n_levels}")

    report = None
    if n_max is None:
        top = converged_spectrum(p.with_values(g=float(grid[-1])), n_levels)
        n_max, report = top.n_max, top.report
    logger.info(f"Sweeping {grid.size} g points with n_max={n_max}, {n_levels} levels")

    payloads = [(p.with_values(g=float(g)).model_dump(), n_max, n_levels) for g in grid]
    results = run_ordered(_diagonalize_point, payloads, jobs)

    settings = get_settings()
    shape = (grid.size, n_levels)
    energies, sx, sz, nbar, sy = (np.empty(shape) for _ in range(5))
    tracked_ok = np.ones(shape, dtype=bool)
    breaks: List[TrackingBreak] = []

    previous = None
    for i, (values, vectors, table) in enumerate(results):
        if previous is None:
            assignment = np.arange(n_levels)
        else:
            assignment, overlaps = match_levels(previous, vectors)
            for curve in np.flatnonzero(overlaps < settings.TRACK_MIN_OVERLAP):
                item = TrackingBreak(index=i, g=float(grid[i]), curve=int(curve), overlap=float(overlaps[curve]))
                breaks.append(item)
                tracked_ok[i, curve] = False
                logger.warning(f"Tracking break at g={item.g:.6g}, curve {item.curve}: overlap {item.overlap:.3f}")
        energies[i] = values[assignment]
        sx[i], sz[i], nbar[i], sy[i] = (table[row, assignment] for row in range(4))
        previous = vectors[:, assignment]

    return SpectralGraph(
        params=p,
        g_grid=grid,
        n_max=n_max,
        energies=energies,
        sx=sx,
        sz=sz,
        nbar=nbar,
        sy_check=sy,
        tracked_ok=tracked_ok,
        breaks=breaks,
        report=report,
    )


def _candidate_pairs(energies: np.ndarray) -> List[Tuple[int, int]]:
    pairs = set()
    for row in energies:
        order = np.argsort(row, kind="stable")
        for a, b in zip(order[:-1], order[1:]):
            pairs.add((int(min(a, b)), int(max(a, b))))
    return sorted(pairs)


def _runs(indices: Sequence[int]) -> List[List[int]]:
    groups: List[List[int]] = []
    for i in indices:
        if groups and i <= groups[-1][-1] + 1:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _refine(g: np.ndarray, d: np.ndarray, i: int) -> Tuple[float, float]:
    """Parabola through three points of the signed gap around index i: (g*, |gap|)"""
    if g.size < 3:
        return float(g[i]), float(abs(d[i]))
    i = min(max(i, 1), g.size - 2)
    gs, ds = g[i - 1:i + 2], d[i - 1:i + 2]
    lo, hi = gs[0], gs[-1]
    coeffs = np.polyfit(gs, ds, 2)

    roots = np.roots(coeffs)
    real = [r.real for r in roots if abs(r.imag) < 1e-12 and lo <= r.real <= hi]
    if real:
        root = min(real, key=lambda r: abs(r - g[i]))
        return float(root), 0.0

    a, b, _ = coeffs
    if a != 0:
        vertex = -b / (2.0 * a)
        if lo <= vertex <= hi:
            return float(vertex), float(abs(np.polyval(coeffs, vertex)))
    k = int(np.argmin(np.abs(ds)))
    return float(gs[k]), float(abs(ds[k]))


def detect_degeneracies(sg: SpectralGraph, gap_tol: Optional[float] = None) -> List[Degeneracy]:
    """Crossings and near-degeneracies of neighbouring curves.

    For every pair of curves that are adjacent in energy somewhere on the
    grid, local minima of |E_a - E_b| and sign changes of E_a - E_b are
    refined with a three-point parabola and reported below gap_tol.
    """
    gap_tol = get_settings().GAP_TOL if gap_tol is None else gap_tol
    g = sg.g_grid
    found: List[Degeneracy] = []

    for a, b in _candidate_pairs(sg.energies):
        d = sg.energies[:, a] - sg.energies[:, b]
        mag = np.abs(d)
        candidates = set()
        for i in range(1, g.size - 1):
            if mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]:
                candidates.add(i)
        for i in range(g.size - 1):
            if d[i] == 0 or np.sign(d[i]) != np.sign(d[i + 1]):
                candidates.add(i if mag[i] <= mag[i + 1] else i + 1)
        if g.size == 1:
            candidates.add(0)

        for run in _runs(sorted(candidates)):
            i = min(run, key=lambda k: mag[k])
            g_star, gap = _refine(g, d, i)
            if gap < gap_tol:
                found.append(Degeneracy(g=g_star, curves=(a, b), gap=gap, index=i))

    found.sort(key=lambda item: (item.g, item.curves))
    logger.info(f"{len(found)} degeneracies below gap {gap_tol:g}")
    return found
