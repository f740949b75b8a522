"""
Parent Hamiltonian H' = H0 + V' for integer M.

    V' = [[0, U f(N) a^M U], [U' (a')^M f(N) U', 0]],  U = exp(g~ (a - a'))

has the zeroth-order degenerate states (|n-M>_+, alpha |n>_-)/sqrt(2) as
exact eigenstates with eigenvalues w(n - M/2) + alpha w_n f(n-M), and
(0, |n>_-) for n < M with eigenvalue w(n - M/2).
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import ConvergenceError, DomainError, TruncationError
from rabi_asym.models import ModelParams, StateLabel
from rabi_asym.physics.fock import (
    TruncatedFockBasis,
    annihilation,
    displacement_extended,
    retained_levels,
    zeroth_order_state,
)
from rabi_asym.physics.hamiltonian import build_rotated_hamiltonian, build_unperturbed_rotated
from rabi_asym.specfun.polynomials import laguerre, overlap_F, overlap_F_column

logger = logging.getLogger(__name__)

FKind = Literal["special", "geometric", "level_splittings", "zero"]


@dataclass(frozen=True)
class FChoice:
    """Real function f(m) on m >= 0 that fixes V'"""
    kind: FKind
    coefficient: float = 0.0
    s: float = 1.0
    splittings: Tuple[float, ...] = ()

    @classmethod
    def special(cls) -> "FChoice":
        """Delta / (-g~)^M, the choice whose number-conserving part is Delta"""
        return cls(kind="special")

    @classmethod
    def geometric(cls, coefficient: float, s: float) -> "FChoice":
        return cls(kind="geometric", coefficient=coefficient, s=s)

    @classmethod
    def level_splittings(cls, splittings: Sequence[float]) -> "FChoice":
        """f(m) = Delta_{m+M} / w_{m+M}, so that v'_{n alpha} = alpha Delta_n"""
        return cls(kind="level_splittings", splittings=tuple(float(v) for v in splittings))

    @classmethod
    def zero(cls) -> "FChoice":
        return cls(kind="zero")

    def values(self, m: np.ndarray, p: ModelParams) -> np.ndarray:
        m = np.asarray(m)
        if self.kind == "zero":
            return np.zeros(m.shape)
        if self.kind == "special":
            return np.full(m.shape, special_constant(p))
        if self.kind == "geometric":
            return self.coefficient * np.power(float(self.s), m)
        if self.kind == "level_splittings":
            M = p.integer_M()
            out = np.zeros(m.shape)
            for i, k in np.ndenumerate(m):
                if k + M < len(self.splittings):
                    out[i] = self.splittings[k + M] / w_factor(int(k) + M, M)
            return out
        raise DomainError(f"unknown f kind {self.kind!r}")

    def at(self, m: int, p: ModelParams) -> float:
        return float(self.values(np.array([m]), p)[0])


@dataclass
class ParentEigenpair:
    label: StateLabel
    energy: float
    v_prime: float
    state: np.ndarray
    residual: float


def special_constant(p: ModelParams) -> float:
    """Delta / (-g~)^M written as (-1)^M Delta g~^{-M}"""
    M = p.integer_M()
    if p.g_tilde == 0:
        raise DomainError("special choice of f needs g > 0")
    return (-1.0) ** M * p.delta * p.g_tilde ** (-M)


def w_factor(n: int, M: int) -> float:
    """sqrt(n!/(n-M)!)"""
    if M < 0 or n < M:
        raise DomainError(f"w_factor needs n >= M >= 0, got n={n}, M={M}")
    return math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(n - M + 1)))


def _w_row(m: np.ndarray, M: int) -> np.ndarray:
    return np.exp(0.5 * (special.gammaln(m + M + 1) - special.gammaln(m + 1)))


def _extended_operators(p: ModelParams, f: FChoice, levels: int) -> Tuple[np.ndarray, np.ndarray]:
    """(U, f(N) a^M) on a basis padded for the shift g~ and the M lowerings"""
    M = p.integer_M()
    U = displacement_extended(p.g_tilde, levels + M)
    size = U.shape[0]
    lowered = np.linalg.matrix_power(annihilation(size), M)
    f_diag = f.values(np.arange(size), p)
    return U, f_diag[:, None] * lowered


def vprime_block(p: ModelParams, f: FChoice, b: TruncatedFockBasis) -> np.ndarray:
    """Upper off-diagonal block U f(N) a^M U, cropped to the basis.

    The special choice of f makes f~(n) = <n|U' f(N) a^M U|n> = Delta
    for every n (see `f_tilde_matrix`). The literal diagonal of this
    block, <n|U f(N) a^M U|n>, is not constant and is not Delta.

    Raises:
        TruncationError: the displacement keeps no orthonormal columns
    """
    U, fa = _extended_operators(p, f, b.levels)
    if retained_levels(U[: b.levels, : b.levels]) == 0:
        raise TruncationError(b.n_max, f"displacement by {p.g_tilde} does not fit")
    return (U @ fa @ U)[: b.levels, : b.levels]


def build_vprime(p: ModelParams, f: FChoice, b: TruncatedFockBasis) -> np.ndarray:
    B = vprime_block(p, f, b)
    zero = np.zeros_like(B)
    return np.block([[zero, B], [B.T, zero]])


def parent_hamiltonian(p: ModelParams, f: FChoice, b: TruncatedFockBasis) -> np.ndarray:
    return build_unperturbed_rotated(p, b) + build_vprime(p, f, b)


def headroom(p: ModelParams, b: TruncatedFockBasis) -> int:
    """Largest n whose analytic eigenpair stays inside the truncation"""
    return b.n_max - p.integer_M() - int(math.ceil(10.0 * p.g_tilde ** 2))


def _labels_up_to(n_top: int, M: int) -> List[StateLabel]:
    labels = []
    for n in range(n_top + 1):
        if n < M:
            labels.append(StateLabel(n, 0, "alpha"))
        else:
            labels.extend(StateLabel(n, alpha, "alpha") for alpha in (1, -1))
    return labels


def parent_eigensystem(
    p: ModelParams,
    f: FChoice,
    b: TruncatedFockBasis,
    n_limit: Optional[int] = None,
) -> List[ParentEigenpair]:
    """Analytic eigenpairs of H' with their residuals ||H' psi - E' psi||.

    Levels are emitted up to the headroom limit (or n_limit), stopping at
    the first state whose Fock tail no longer fits.

    Raises:
        TruncationError: not even n = 0 fits
    """
    M = p.integer_M()
    n_top = headroom(p, b)
    if n_top < 0:
        raise TruncationError(b.n_max, f"no headroom for M={M}, g~={p.g_tilde}")
    if n_limit is not None:
        n_top = min(n_top, n_limit)

    H = parent_hamiltonian(p, f, b)
    pairs: List[ParentEigenpair] = []
    for label in _labels_up_to(n_top, M):
        try:
            state = zeroth_order_state(label, p, b)
        except TruncationError as e:
            if not pairs:
                raise
            logger.info(f"Stopping parent eigenpairs at n={label.n}: {e.detail}")
            break
        v = 0.0 if label.n < M else label.branch * w_factor(label.n, M) * f.at(label.n - M, p)
        energy = p.omega * (label.n - M / 2.0) + v
        residual = float(np.linalg.norm(H @ state - energy * state))
        pairs.append(ParentEigenpair(label=label, energy=energy, v_prime=v, state=state, residual=residual))
    return pairs


def first_order_shifts(
    p: ModelParams,
    b: TruncatedFockBasis,
    n_limit: Optional[int] = None,
) -> List[Tuple[StateLabel, float, float]]:
    """(label, <n;alpha|H|n;alpha> - E0, alpha w Delta~ F_{n,n-M}(2g~)) per degenerate state"""
    M = p.integer_M()
    n_top = max(headroom(p, b), -1)
    if n_limit is not None:
        n_top = min(n_top, n_limit)
    H = build_rotated_hamiltonian(p, b)
    out = []
    for label in _labels_up_to(n_top, M):
        if label.n < M:
            continue
        try:
            state = zeroth_order_state(label, p, b)
        except TruncationError:
            break
        shift = float(state @ H @ state) - p.omega * (label.n - M / 2.0)
        reference = label.branch * p.delta * overlap_F(label.n, label.n - M, 2.0 * p.g_tilde)
        out.append((label, shift, reference))
    return out


def _converged_sum(
    terms_for: Callable[[int], np.ndarray],
    start: int,
    series_cutoff: Optional[int],
    what: str,
) -> float:
    settings = get_settings()
    if series_cutoff is not None:
        return math.fsum(terms_for(series_cutoff))
    count = start
    while True:
        terms = terms_for(count)
        total = math.fsum(terms)
        tail = np.abs(terms[-settings.SERIES_STALL_TERMS:])
        if np.all(tail <= settings.SERIES_REL_TOL * abs(total)):
            return total
        if count >= settings.SERIES_MAX_TERMS:
            raise ConvergenceError(what, iterations=count)
        count = min(2 * count, settings.SERIES_MAX_TERMS)


def _start_count(n: int, M: int, X: float) -> int:
    return int(X + n + M + 12.0 * math.sqrt((X + 1.0) * (2 * n + 1))) + 60


def f_tilde_diag(
    n: int,
    p: ModelParams,
    f: FChoice,
    series_cutoff: Optional[int] = None,
) -> float:
    """Number-conserving part f~(n) of V'.

    f~(n) = ((-1)^M e^{-g~^2} / n!) sum_m f(m)/m! H_{n,m}(g~,g~) H_{n,m+M}(g~,g~),
    summed as sum_m f(m) w_{m+M} F_{mn}(g~) F_{m+M,n}(g~) to stay in range.

    Raises:
        ConvergenceError: the series does not settle within SERIES_MAX_TERMS
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    M = p.integer_M()
    g = p.g_tilde

    def terms_for(count: int) -> np.ndarray:
        m = np.arange(count)
        column = overlap_F_column(n, count + M, g)
        return f.values(m, p) * _w_row(m, M) * column[:count] * column[M:count + M]

    return _converged_sum(terms_for, _start_count(n, M, g * g), series_cutoff, f"f~({n}) series")


def f_tilde_matrix(n: int, p: ModelParams, f: FChoice, b: TruncatedFockBasis) -> float:
    """<n|U' f(N) a^M U|n> = <n|_+ f(N) a^M |n>_+ from the truncated operators"""
    U, fa = _extended_operators(p, f, b.levels)
    if n >= retained_levels(U[: b.levels, : b.levels]):
        raise TruncationError(b.n_max, f"column {n} of U(g~) is not retained")
    column = U[:, n]
    return float(column @ fa @ column)


def f_tilde_geometric(n: int, p: ModelParams, s: float) -> float:
    """Closed form of f~(n) for f(m) = s^m Delta / (-g~)^M.

    Delta e^{-(1-s) g~^2} sum_k C(M,k) (s-1)^k s^{n-k} L_{n-k}^(k)(-g~^2 (1-s)^2 / s)
    """
    if s == 0:
        raise DomainError("geometric f needs s != 0")
    M = p.integer_M()
    X = p.g_tilde ** 2
    arg = -X * (1.0 - s) ** 2 / s
    total = math.fsum(
        math.comb(M, k) * (s - 1.0) ** k * s ** (n - k) * laguerre(n - k, k, arg)
        for k in range(min(n, M) + 1)
    )
    return p.delta * math.exp(-(1.0 - s) * X) * total


def verify_shifted_genfunc(n: int, M: int, x: float, s: float) -> float:
    """|LHS - RHS| of the shifted-index generating function at equal arguments.

    LHS = sum_m H_{m+M,n}(x,x) H_{m,n}(x,x) s^m / (n! m!)
    RHS = e^{s x^2} x^M sum_k C(M,k) (s-1)^k s^{n-k} L_{n-k}^(k)(-x^2 (1-s)^2 / s)

    Raises:
        DomainError: s = 0 or |s| > 1
    """
    if s == 0 or abs(s) > 1:
        raise DomainError(f"generating function check needs 0 < |s| <= 1, got {s}")
    if n < 0 or M < 0:
        raise DomainError(f"need n, M >= 0, got n={n}, M={M}")
    X = x * x

    def terms_for(count: int) -> np.ndarray:
        m = np.arange(count)
        column = overlap_F_column(n, count + M, x)
        return np.power(float(s), m) * _w_row(m, M) * column[:count] * column[M:count + M]

    lhs = (-1.0) ** M * math.exp(X) * _converged_sum(terms_for, _start_count(n, M, X), None, "shifted generating function")
    rhs = math.exp(s * X) * x ** M * math.fsum(
        math.comb(M, k) * (s - 1.0) ** k * s ** (n - k) * laguerre(n - k, k, -X * (1.0 - s) ** 2 / s)
        for k in range(min(n, M) + 1)
    )
    return abs(lhs - rhs)
