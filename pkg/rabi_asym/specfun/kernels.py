"""
Second-order kernels of the perturbation expansion in Delta.

    calF(n, x, z)  = sum_m F_{nm}(x)^2 / (m + z)
    calG(p, q, x)  = sum_{m != q} F_{pm}(x)^2 / (m - q)
    curly_C(n, M, x) = [calG(n, n-M) - calG(n-M, n)] / (2 F_{n,n-M})

Closed forms are finite sums of Gamma-weighted regularized 1F1 values;
the direct sums over m are kept as independent oracles (`*_series`).
"""
import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import special

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import ConvergenceError, DomainError, ZeroDivisorError
from rabi_asym.specfun.gamma import check_pole
from rabi_asym.specfun.kummer import kummer_M_reg, kummer_M_reg_partials
from rabi_asym.specfun.polynomials import (
    hermite2_terms,
    overlap_F,
    overlap_F_squared_dx_row,
    overlap_F_squared_row,
)
from rabi_asym.specfun.types import EvalMethod, EvalResult

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Direct series (oracles)
# ---------------------------------------------------------------------------

def _row_sum(
    n: int,
    x: float,
    row: Callable[[int, int, float], np.ndarray],
    weight: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> EvalResult:
    settings = get_settings()
    stall = settings.SERIES_STALL_TERMS
    X = x * x
    count = int(X + n + 12.0 * math.sqrt((X + 1.0) * (2 * n + 1))) + 60
    while True:
        m = np.arange(count)
        terms = weight(m, row(n, count, x))
        total = math.fsum(terms)
        tail = np.abs(terms[-stall:])
        if np.all(tail <= settings.SERIES_REL_TOL * max(abs(total), 1e-300)):
            break
        if count >= settings.SERIES_MAX_TERMS:
            raise ConvergenceError(f"overlap series n={n}, x={x}", iterations=count)
        count = min(2 * count, settings.SERIES_MAX_TERMS)
    est = 4.0 * _EPS * float(np.sum(np.abs(terms))) + float(tail[-1])
    return EvalResult(total, est, EvalMethod.SERIES)


def calF_series(n: int, x: float, z: float) -> EvalResult:
    """sum_m F_{nm}(x)^2 / (m + z), summed directly"""
    check_pole(z)
    return _row_sum(n, x, overlap_F_squared_row, lambda m, sq: sq / (m + z))


def calF_dz_series(n: int, x: float, z: float) -> EvalResult:
    check_pole(z)
    return _row_sum(n, x, overlap_F_squared_row, lambda m, sq: -sq / (m + z) ** 2)


def calF_dx_series(n: int, x: float, z: float) -> EvalResult:
    check_pole(z)
    return _row_sum(n, x, overlap_F_squared_dx_row, lambda m, dsq: dsq / (m + z))


def calG_series(p: int, q: int, x: float) -> EvalResult:
    """sum_{m != q} F_{pm}(x)^2 / (m - q), summed directly"""
    def weight(m: np.ndarray, sq: np.ndarray) -> np.ndarray:
        shifted = np.where(m == q, 1, m - q)
        return np.where(m == q, 0.0, sq / shifted)
    return _row_sum(p, x, overlap_F_squared_row, weight)


def pole_residue(p: int, q: int, x: float) -> float:
    """Residue of calF_p(x, z) at z = -q: e^{-x^2} H_pq(x,x)^2 / (p! q!) = F_pq(x)^2"""
    return overlap_F(p, q, x) ** 2


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _in_guard_band(z: float) -> bool:
    return z < 0 and abs(z - round(z)) < get_settings().GUARD_BAND


def calF(n: int, x: float, z: float) -> EvalResult:
    """calF_n(x, z) from its closed form.

    sum_k C(n,k) x^{2k}/k! (2k)! Gamma(z+n-k) M(2k+1, z+k+n+1, -x^2) with
    the regularized M. Within the guard band around negative integers the
    direct series is used instead.

    Raises:
        PoleError: z within pole_tol of a nonpositive integer
    """
    if n < 0:
        raise DomainError(f"calF needs n >= 0, got {n}")
    check_pole(z)
    if _in_guard_band(z):
        logger.debug(f"calF guard band at z={z}, using direct series")
        return calF_series(n, x, z)

    X = x * x
    if X == 0:
        return EvalResult(1.0 / (z + n), _EPS / abs(z + n), EvalMethod.CLOSED_FORM)

    terms, errors = [], []
    for k in range(n + 1):
        zk = z + n - k
        log_pref = (
            _log_binom(n, k) + k * math.log(X) - math.lgamma(k + 1)
            + math.lgamma(2 * k + 1) + float(special.gammaln(zk))
        )
        pref = float(special.gammasgn(zk)) * math.exp(log_pref)
        reg = kummer_M_reg(2 * k + 1, z + k + n + 1, -X)
        terms.append(pref * reg.value)
        errors.append(abs(pref) * reg.est_error)

    est = math.fsum(errors) + 4.0 * _EPS * sum(abs(t) for t in terms)
    return EvalResult(math.fsum(terms), est, EvalMethod.CLOSED_FORM)


def calF_dx(n: int, x: float, z: float) -> EvalResult:
    """d calF_n / dx by term-wise differentiation of the closed form.

    Uses d/dx M(a, b, -x^2) = -2x a M(a+1, b+1, -x^2) for the regularized M.
    """
    check_pole(z)
    if _in_guard_band(z):
        return calF_dx_series(n, x, z)
    if x == 0:
        return EvalResult(0.0, 0.0, EvalMethod.CLOSED_FORM)

    X = x * x
    terms, errors = [], []
    for k in range(n + 1):
        zk = z + n - k
        b = z + k + n + 1
        log_pref = (
            _log_binom(n, k) + k * math.log(X) - math.lgamma(k + 1)
            + math.lgamma(2 * k + 1) + float(special.gammaln(zk))
        )
        pref = float(special.gammasgn(zk)) * math.exp(log_pref)
        m1 = kummer_M_reg(2 * k + 1, b, -X)
        m2 = kummer_M_reg(2 * k + 2, b + 1, -X)
        c1 = pref * 2.0 * k / x
        c2 = -pref * 2.0 * (2 * k + 1) * x
        terms.extend([c1 * m1.value, c2 * m2.value])
        errors.extend([abs(c1) * m1.est_error, abs(c2) * m2.est_error])

    est = math.fsum(errors) + 4.0 * _EPS * sum(abs(t) for t in terms)
    return EvalResult(math.fsum(terms), est, EvalMethod.CLOSED_FORM)


def calG(p: int, q: int, x: float) -> EvalResult:
    """calG_p^(q)(x): the z -> -q limit of calF_p(x, z) with the pole removed.

    First sum (p > q only):
        sum_{k<p-q} C(p,k) x^{2k}/k! B(2k+1, p-q-k) M(2k+1, p-q+1+k, -x^2)
    Second sum, k = max(0, p-q)..p with j = k-p+q, a = p-q-k, b = p-q+1+k:
        e^{-x^2} C(p,k) x^{2k}/k! (2k)! (-1)^j/j! [psi(j+1) M + dM/da + dM/db](a, b, x^2)
    with M regularized.
    """
    if p < 0 or q < 0:
        raise DomainError(f"calG needs p, q >= 0, got ({p}, {q})")
    X = x * x
    if X == 0:
        value = 0.0 if p == q else 1.0 / (p - q)
        return EvalResult(value, 0.0, EvalMethod.CLOSED_FORM)

    terms, errors = [], []
    log_X = math.log(X)

    for k in range(max(0, p - q)):
        log_pref = (
            _log_binom(p, k) + k * log_X - math.lgamma(k + 1)
            + math.lgamma(2 * k + 1) + math.lgamma(p - q - k)
        )
        pref = math.exp(log_pref)
        reg = kummer_M_reg(2 * k + 1, p - q + k + 1, -X)
        terms.append(pref * reg.value)
        errors.append(pref * reg.est_error)

    for k in range(max(0, p - q), p + 1):
        j = k - p + q
        log_pref = (
            _log_binom(p, k) + k * log_X - math.lgamma(k + 1)
            + math.lgamma(2 * k + 1) - math.lgamma(j + 1)
        )
        pref = (-1.0) ** j * math.exp(log_pref)
        partials = kummer_M_reg_partials(p - q - k, p - q + k + 1, X, log_scale=-X)
        psi = float(special.digamma(j + 1))
        bracket = psi * partials.value.value + partials.d_a.value + partials.d_b.value
        terms.append(pref * bracket)
        errors.append(
            abs(pref) * (
                abs(psi) * partials.value.est_error
                + partials.d_a.est_error
                + partials.d_b.est_error
            )
        )

    est = math.fsum(errors) + 4.0 * _EPS * sum(abs(t) for t in terms)
    return EvalResult(math.fsum(terms), est, EvalMethod.CLOSED_FORM)


def second_order_asymmetry(n: int, M: int, x: float) -> EvalResult:
    """calG_n^(n-M)(x) - calG_{n-M}^(n)(x), the numerator of curly_C"""
    if M < 1 or n < M:
        raise DomainError(f"need n >= M >= 1, got n={n}, M={M}")
    upper = calG(n, n - M, x)
    lower = calG(n - M, n, x)
    return EvalResult(
        upper.value - lower.value,
        upper.est_error + lower.est_error,
        EvalMethod.CLOSED_FORM,
    )


def curly_C(n: int, M: int, x: float) -> EvalResult:
    """[calG_n^(n-M) - calG_{n-M}^(n)] / (2 F_{n,n-M}(x)).

    Raises:
        ZeroDivisorError: H_{n,n-M}(x,x) vanishes within zero_tol of its term scale
    """
    if M < 1 or n < M:
        raise DomainError(f"curly_C needs n >= M >= 1, got n={n}, M={M}")
    terms = hermite2_terms(n, n - M, x, x)
    scale = sum(abs(t) for t in terms)
    if scale == 0 or abs(math.fsum(terms)) <= get_settings().ZERO_TOL * scale:
        raise ZeroDivisorError(n, M, x)
    F = overlap_F(n, n - M, x)
    if F == 0.0:
        raise ZeroDivisorError(n, M, x)

    numerator = second_order_asymmetry(n, M, x)
    value = numerator.value / (2.0 * F)
    est = numerator.est_error / (2.0 * abs(F)) + 4.0 * _EPS * abs(value)
    return EvalResult(value, est, EvalMethod.CLOSED_FORM)


# ---------------------------------------------------------------------------
# Asymptotics
# ---------------------------------------------------------------------------

def _rising(a: float, m: int) -> float:
    return math.prod(a + i for i in range(m)) if m > 0 else 1.0


def asymptotic_coefficient(n: int, w: float, k: int) -> float:
    """(w)_k 3F2(-n, -k, k+1; 1, w; 1) as the finite double sum.

    Written with (w)_k / (w)_j = (w+j)_{k-j} so that nonpositive integer w
    stays finite.
    """
    total = 0.0
    for j in range(min(n, k) + 1):
        num = _rising(-n, j) * _rising(-k, j) * _rising(k + 1, j)
        total += num / math.factorial(j) ** 2 * _rising(w + j, k - j)
    return total


def _check_asymptotic_domain(x: float, order: int, size: float, max_order: int) -> None:
    if order < 0 or order > max_order:
        raise DomainError(f"asymptotic order must lie in 0..{max_order}, got {order}")
    if x * x < 4.0 * (order + size):
        raise DomainError(
            f"x={x} too small for asymptotic order {order} (need x^2 >= {4.0 * (order + size)})"
        )


def calF_asymptotic(n: int, x: float, z: float, order: int = 1) -> EvalResult:
    """sum_{k<=order} (1-z-n)_k 3F2(-n,-k,k+1; 1,1-z-n; 1) / x^{2k+2}"""
    _check_asymptotic_domain(x, order, n + abs(z), 4)
    w = 1.0 - z - n
    X = x * x
    value = math.fsum(asymptotic_coefficient(n, w, k) / X ** (k + 1) for k in range(order + 1))
    est = abs(asymptotic_coefficient(n, w, order + 1)) / X ** (order + 2)
    return EvalResult(value, est, EvalMethod.ASYMPTOTIC)


def calG_asymptotic(
    p: int,
    q: int,
    x: float,
    order: int = 1,
    gated: bool = False,
) -> EvalResult:
    """Large-x expansion of calG_p^(q)(x).

    The default is the regular part of the calF expansion at z = -q,
    1/x^2 + (p+q+1)/x^4 + ..., valid for every p, q. With gated=True the
    step-function form Theta(p>q)/x^2 + (p+q+1) Theta(p>q+1)/x^4 is
    returned instead (order <= 1).
    """
    X = x * x
    if gated:
        _check_asymptotic_domain(x, order, p + q, 1)
        value = (1.0 / X) if p > q else 0.0
        next_term = (p + q + 1) / X ** 2 if p > q + 1 else 0.0
        if order >= 1:
            value += next_term
            next_term = 0.0
        return EvalResult(value, abs(next_term) + 1.0 / X ** 3, EvalMethod.ASYMPTOTIC)

    _check_asymptotic_domain(x, order, p + q, 2)
    w = 1.0 + q - p
    value = math.fsum(asymptotic_coefficient(p, w, k) / X ** (k + 1) for k in range(order + 1))
    est = abs(asymptotic_coefficient(p, w, order + 1)) / X ** (order + 2)
    return EvalResult(value, est, EvalMethod.ASYMPTOTIC)
