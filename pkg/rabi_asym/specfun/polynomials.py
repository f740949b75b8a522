"""
Two-variable Hermite polynomials, associated Laguerre polynomials and the
overlap F_{n'n}(x) of oppositely shifted number states.
"""
import math
from typing import List

import numpy as np
from scipy import special

from rabi_asym.core.errors import DomainError

# Above this index the binomial sum is evaluated in log-space.
HERMITE_DIRECT_MAX = 60
_LOG_MAX = 709.0


def hermite2_terms(n: int, m: int, x: float, y: float) -> List[float]:
    """Terms C(n,k) C(m,k) k! (-1)^k x^(n-k) y^(m-k) of H_{nm}(x, y), k = 0..min(n, m)"""
    if n < 0 or m < 0:
        raise DomainError(f"hermite2 needs n, m >= 0, got ({n}, {m})")

    if max(n, m) <= HERMITE_DIRECT_MAX:
        return [
            float(math.comb(n, k) * math.comb(m, k) * math.factorial(k))
            * (-1.0) ** k * x ** (n - k) * y ** (m - k)
            for k in range(min(n, m) + 1)
        ]

    terms = []
    log_nm = math.lgamma(n + 1) + math.lgamma(m + 1)
    for k in range(min(n, m) + 1):
        px, py = n - k, m - k
        if (px > 0 and x == 0) or (py > 0 and y == 0):
            terms.append(0.0)
            continue
        log_mag = log_nm - math.lgamma(k + 1) - math.lgamma(px + 1) - math.lgamma(py + 1)
        if px:
            log_mag += px * math.log(abs(x))
        if py:
            log_mag += py * math.log(abs(y))
        if log_mag > _LOG_MAX:
            raise OverflowError(f"H_{{{n}{m}}}({x}, {y}) term {k} exceeds double range")
        sign = (-1.0) ** k
        if x < 0 and px % 2:
            sign = -sign
        if y < 0 and py % 2:
            sign = -sign
        terms.append(sign * math.exp(log_mag))
    return terms


def hermite2(n: int, m: int, x: float, y: float) -> float:
    """H_{nm}(x, y) = sum_k C(n,k) C(m,k) k! (-1)^k x^(n-k) y^(m-k), compensated summation"""
    return math.fsum(hermite2_terms(n, m, x, y))


def laguerre(n: int, alpha: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^(alpha)(x) for integer alpha.

    alpha > -1 goes through scipy; other integer alpha use the three-term
    recurrence (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}.
    """
    if n < 0:
        raise DomainError(f"laguerre needs n >= 0, got {n}")
    if alpha > -1:
        return float(special.eval_genlaguerre(n, alpha, x))

    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def overlap_F(n_prime: int, n: int, x: float) -> float:
    """F_{n'n}(x) = (-1)^n' H_{nn'}(x,x) e^{-x^2/2} / sqrt(n'! n!).

    Evaluated through H_{nm}(x,x) = (-1)^s s! x^d L_s^(d)(x^2) with
    s = min(n, n'), d = |n - n'|, in log-space.
    """
    if n_prime < 0 or n < 0:
        raise DomainError(f"overlap_F needs nonnegative indices, got ({n_prime}, {n})")
    s, big = min(n, n_prime), max(n, n_prime)
    d = big - s
    X = x * x
    if x == 0:
        return 1.0 if d == 0 else 0.0

    L = float(special.eval_genlaguerre(s, d, X))
    if L == 0.0:
        return 0.0
    log_mag = (
        0.5 * (math.lgamma(s + 1) - math.lgamma(big + 1))
        + d * math.log(abs(x))
        + math.log(abs(L))
        - 0.5 * X
    )
    sign = (-1) ** (n_prime + s) * math.copysign(1.0, L)
    if x < 0 and d % 2:
        sign = -sign
    return sign * math.exp(log_mag)


def overlap_F_prime(n_prime: int, n: int, x: float) -> float:
    """dF_{n'n}/dx via d/dx H_{nm}(x,x) = n H_{n-1,m} + m H_{n,m-1}"""
    dH = 0.0
    if n > 0:
        dH += n * hermite2(n - 1, n_prime, x, x)
    if n_prime > 0:
        dH += n_prime * hermite2(n, n_prime - 1, x, x)
    bracket = dH - x * hermite2(n, n_prime, x, x)
    norm = math.exp(-0.5 * x * x - 0.5 * (math.lgamma(n + 1) + math.lgamma(n_prime + 1)))
    return (-1) ** n_prime * bracket * norm


def _row_indices(n: int, count: int):
    m = np.arange(count)
    s = np.minimum(m, n)
    big = np.maximum(m, n)
    return m, s, big, big - s


def overlap_F_squared_row(n: int, count: int, x: float) -> np.ndarray:
    """F_{nm}(x)^2 for m = 0..count-1"""
    if x == 0:
        row = np.zeros(count)
        if n < count:
            row[n] = 1.0
        return row

    X = x * x
    _, s, big, d = _row_indices(n, count)
    L = special.eval_genlaguerre(s, d.astype(float), X)
    with np.errstate(divide="ignore"):
        log_sq = (
            special.gammaln(s + 1) - special.gammaln(big + 1)
            + d * math.log(X)
            + 2.0 * np.log(np.abs(L))
            - X
        )
    return np.exp(log_sq)


def overlap_F_squared_dx_row(n: int, count: int, x: float) -> np.ndarray:
    """d/dx of F_{nm}(x)^2 for m = 0..count-1.

    With F^2 = (s!/S!) X^d L^2 e^{-X}, X = x^2 and dL_s^(d)/dX = -L_{s-1}^(d+1):
    d(F^2)/dx = F^2 (2d/x - 2x) - 4x (s!/S!) X^d e^{-X} L L_{s-1}^(d+1).
    """
    if x == 0:
        return np.zeros(count)

    X = x * x
    _, s, big, d = _row_indices(n, count)
    L = special.eval_genlaguerre(s, d.astype(float), X)
    L_lower = np.where(
        s > 0,
        special.eval_genlaguerre(np.maximum(s - 1, 0), d + 1.0, X),
        0.0,
    )
    log_base = special.gammaln(s + 1) - special.gammaln(big + 1) + d * math.log(X) - X
    with np.errstate(divide="ignore"):
        sq = np.exp(log_base + 2.0 * np.log(np.abs(L)))
        cross = np.sign(L) * np.sign(L_lower) * np.exp(
            log_base + np.log(np.abs(L)) + np.log(np.abs(L_lower))
        )
    return sq * (2.0 * d / x - 2.0 * x) - 4.0 * x * cross


def overlap_F_column(n: int, count: int, x: float) -> np.ndarray:
    """Signed F_{mn}(x) for m = 0..count-1"""
    if x == 0:
        column = np.zeros(count)
        if n < count:
            column[n] = 1.0
        return column

    X = x * x
    m, s, big, d = _row_indices(n, count)
    L = special.eval_genlaguerre(s, d.astype(float), X)
    with np.errstate(divide="ignore"):
        log_mag = (
            0.5 * (special.gammaln(s + 1) - special.gammaln(big + 1))
            + d * math.log(abs(x))
            + np.log(np.abs(L))
            - 0.5 * X
        )
    sign = np.where((m + s) % 2 == 1, -1.0, 1.0) * np.sign(L)
    if x < 0:
        sign = sign * np.where(d % 2 == 1, -1.0, 1.0)
    return sign * np.exp(log_mag)
