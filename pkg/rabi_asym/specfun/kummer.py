"""
Confluent hypergeometric function M(a, b, x) and its regularized form
M(a, b, x) / Gamma(b).

Routes:
    x >= 0      direct Maclaurin series, summed in log-space
    x < 0       Kummer transform e^x M(b-a, b, -x), unless the series
                terminates (a a nonpositive integer)
    large x     asymptotic series e^x x^(a-b)/Gamma(a) sum (1-a)_k (b-a)_k / (k! x^k)

Every route accepts a `log_scale` so callers can fold exponential
prefactors such as e^{-x^2} into the terms without overflow.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import ConvergenceError, DomainError
from rabi_asym.specfun.gamma import check_pole, is_nonpositive_integer, log_rgamma
from rabi_asym.specfun.types import EvalMethod, EvalResult

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps
_LOG_MAX = 709.0


def _series_terms(a: float, b: float, x: float, count: int, log_scale: float) -> np.ndarray:
    """(a)_j x^j / (Gamma(b+j) j!) * e^{log_scale} for j < count"""
    j = np.arange(count, dtype=float)
    factors = a + j[:-1]
    with np.errstate(divide="ignore"):
        log_poch = np.concatenate(([0.0], np.cumsum(np.log(np.abs(factors)))))
    sign_poch = np.concatenate(([1.0], np.cumprod(np.sign(factors))))

    log_rg, sign_rg = log_rgamma(b + j)
    if x == 0:
        log_x = np.where(j == 0, 0.0, -np.inf)
    else:
        log_x = j * math.log(abs(x))
    sign_x = np.where((x < 0) & (j % 2 == 1), -1.0, 1.0)

    log_t = log_poch + log_x - special.gammaln(j + 1) + log_rg + log_scale
    sign = sign_poch * sign_rg * sign_x
    live = sign != 0
    if np.any(live) and np.max(log_t[live]) > _LOG_MAX:
        raise OverflowError(f"1F1({a}, {b}, {x}) terms exceed double range")
    with np.errstate(under="ignore", over="ignore"):
        return np.where(live, sign * np.exp(np.where(live, log_t, 0.0)), 0.0)


def _sum_series(a: float, b: float, x: float, log_scale: float = 0.0) -> Tuple[float, float]:
    """Sum the Maclaurin series of the regularized function; returns (value, est_error)"""
    settings = get_settings()
    stall = settings.SERIES_STALL_TERMS

    if is_nonpositive_integer(a):
        count = int(-a) + 1
        terminating = True
    else:
        count = int(abs(x) + 10.0 * math.sqrt(abs(x) + 1.0) + abs(a) + abs(b)) + stall + 10
        terminating = False

    while True:
        terms = _series_terms(a, b, x, count, log_scale)
        total = math.fsum(terms)
        tail = np.abs(terms[-stall:])
        if terminating or np.all(tail <= settings.SERIES_REL_TOL * abs(total)):
            break
        if count >= settings.SERIES_MAX_TERMS:
            raise ConvergenceError(f"1F1 series for a={a}, b={b}, x={x}", iterations=count)
        count = min(2 * count, settings.SERIES_MAX_TERMS)

    abs_sum = float(np.sum(np.abs(terms)))
    est = 4.0 * _EPS * abs_sum + (0.0 if terminating else float(tail[-1]))
    return total, est


def _asymptotic(a: float, b: float, x: float, log_scale: float = 0.0) -> Tuple[float, float]:
    """Large positive x, a not a nonpositive integer; drops the e^{-x}-relative branch"""
    prefactor_log = x + (a - b) * math.log(x) - float(special.gammaln(a)) + log_scale
    if prefactor_log > _LOG_MAX:
        raise OverflowError(f"1F1({a}, {b}, {x}) exceeds double range")
    prefactor = float(special.gammasgn(a)) * math.exp(prefactor_log)

    terms = [1.0]
    term = 1.0
    for k in range(get_settings().SERIES_MAX_TERMS):
        nxt = term * (1.0 - a + k) * (b - a + k) / ((k + 1) * x)
        if abs(nxt) >= abs(term) or nxt == 0.0:
            break
        terms.append(nxt)
        term = nxt
        if abs(term) < _EPS * abs(math.fsum(terms)):
            break
    total = math.fsum(terms)
    return prefactor * total, abs(prefactor) * (abs(term) + 4.0 * _EPS * abs(total))


def _regularized(a: float, b: float, x: float, log_scale: float) -> EvalResult:
    settings = get_settings()
    if x == 0:
        log_rg, sign_rg = log_rgamma(np.array([b]))
        value = float(sign_rg[0] * np.exp(log_rg[0] + log_scale)) if sign_rg[0] else 0.0
        return EvalResult(value, 0.0, EvalMethod.SERIES)

    if x < 0 and not is_nonpositive_integer(a):
        # Kummer: M(a, b, x) = e^x M(b-a, b, -x)
        a, x, log_scale = b - a, -x, log_scale + x

    if x >= settings.KUMMER_ASYMPTOTIC_X and not is_nonpositive_integer(a):
        logger.debug(f"1F1 asymptotic route a={a} b={b} x={x}")
        value, est = _asymptotic(a, b, x, log_scale)
        return EvalResult(value, est, EvalMethod.ASYMPTOTIC)

    value, est = _sum_series(a, b, x, log_scale)
    return EvalResult(value, est, EvalMethod.SERIES)


def kummer_M_reg(a: float, b: float, x: float, log_scale: float = 0.0) -> EvalResult:
    """Regularized M(a, b, x)/Gamma(b), entire in a and b; result times e^{log_scale}"""
    return _regularized(a, b, x, log_scale)


def kummer_M(a: float, b: float, x: float) -> EvalResult:
    """Kummer's M(a, b, x) = 1F1(a; b; x).

    Raises:
        PoleError: b within pole_tol of a nonpositive integer
    """
    check_pole(b, "b")
    reg = _regularized(a, b, x, float(special.gammaln(b)))
    sign = float(special.gammasgn(b))
    return EvalResult(sign * reg.value, reg.est_error, reg.method)


@dataclass(frozen=True)
class KummerPartials:
    """M(a,b,x)/Gamma(b) with its a- and b-derivatives"""
    value: EvalResult
    d_a: EvalResult
    d_b: EvalResult


def kummer_M_reg_partials(a: int, b: int, x: float, log_scale: float = 0.0) -> KummerPartials:
    """Regularized M and its parameter derivatives at integer a <= 0 and integer b.

    Term-wise differentiation of sum_j (a)_j x^j / (Gamma(b+j) j!). The value
    and the b-derivative are finite sums. The a-derivative keeps the tail
    j > -a, where d(a)_j/da = (-1)^A A! (j-A-1)! with A = -a, and that tail
    is summed to convergence in log-space.
    """
    if a != int(a) or a > 0 or b != int(b):
        raise DomainError(f"parameter derivatives need integer a <= 0 and integer b, got ({a}, {b})")
    a, b = int(a), int(b)
    A = -a
    settings = get_settings()

    value_terms, da_terms, db_terms = [], [], []
    harmonic = 0.0  # sum_{i<j} 1/(a+i)
    for j in range(A + 1):
        if j > 0:
            harmonic += 1.0 / (a + j - 1)
        if x == 0 and j > 0:
            break
        log_poch = math.lgamma(A + 1) - math.lgamma(A - j + 1)
        sign = (-1.0) ** j
        log_common = log_poch + log_scale - math.lgamma(j + 1)
        if j:
            log_common += j * math.log(abs(x))
            if x < 0 and j % 2:
                sign = -sign

        y = b + j
        if is_nonpositive_integer(y):
            N = -y
            db_terms.append(sign * (-1.0) ** N * math.exp(log_common + math.lgamma(N + 1)))
            value_terms.append(0.0)
            da_terms.append(0.0)
        else:
            rg_sign = float(special.gammasgn(y))
            t = sign * rg_sign * math.exp(log_common - float(special.gammaln(y)))
            value_terms.append(t)
            da_terms.append(t * harmonic)
            db_terms.append(-float(special.digamma(y)) * t)

    tail_total, tail_est, tail_abs = 0.0, 0.0, 0.0
    if x != 0:
        start = max(A + 1, 1 - b)
        count = int(abs(x) + 10.0 * math.sqrt(abs(x) + 1.0)) + settings.SERIES_STALL_TERMS + 10
        while True:
            j = np.arange(start, start + count, dtype=float)
            log_t = (
                math.lgamma(A + 1) + special.gammaln(j - A) + j * math.log(abs(x))
                - special.gammaln(j + 1) - special.gammaln(b + j) + log_scale
            )
            if np.max(log_t) > _LOG_MAX:
                raise OverflowError(f"d/da 1F1 tail exceeds double range at x={x}")
            sign = (-1.0) ** A * np.where((x < 0) & (j % 2 == 1), -1.0, 1.0)
            terms = sign * np.exp(log_t)
            tail_total = math.fsum(terms)
            reference = abs(tail_total + math.fsum(da_terms))
            last = np.abs(terms[-settings.SERIES_STALL_TERMS:])
            if np.all(last <= settings.SERIES_REL_TOL * reference):
                break
            if count >= settings.SERIES_MAX_TERMS:
                raise ConvergenceError(f"d/da 1F1 tail for a={a}, b={b}, x={x}", iterations=count)
            count = min(2 * count, settings.SERIES_MAX_TERMS)
        tail_abs = float(np.sum(np.abs(terms)))
        tail_est = float(last[-1])

    def _result(terms, extra=0.0, extra_abs=0.0, extra_est=0.0) -> EvalResult:
        total = math.fsum(terms + [extra])
        abs_sum = sum(abs(t) for t in terms) + extra_abs
        return EvalResult(total, 4.0 * _EPS * abs_sum + extra_est, EvalMethod.SERIES)

    return KummerPartials(
        value=_result(value_terms),
        d_a=_result(da_terms, tail_total, tail_abs, tail_est),
        d_b=_result(db_terms),
    )
