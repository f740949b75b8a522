"""
Gamma, log-gamma and digamma with explicit pole handling.

scipy.special does the evaluation; this module adds the pole policy and
the signed log of 1/Gamma, which stays finite at the poles of Gamma.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import PoleError


@dataclass(frozen=True)
class GammaValues:
    ln_gamma: float  # log|Gamma(x)|
    digamma: float
    gamma: float
    sign: float


def pole_distance(x: float) -> float:
    """Distance from x to the nearest point of {0, -1, -2, ...}"""
    if x >= 0:
        return x
    return abs(x - round(x))


def check_pole(x: float, what: str = "z", pole_tol: Optional[float] = None) -> None:
    tol = get_settings().POLE_TOL if pole_tol is None else pole_tol
    if pole_distance(x) < tol:
        raise PoleError(x, what)


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_suite(x: float) -> GammaValues:
    """ln|Gamma|, psi and Gamma at x.

    Raises:
        PoleError: x within pole_tol of a nonpositive integer
    """
    check_pole(x, "x")
    return GammaValues(
        ln_gamma=float(special.gammaln(x)),
        digamma=float(special.digamma(x)),
        gamma=float(special.gamma(x)),
        sign=float(special.gammasgn(x)),
    )


def log_rgamma(y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Elementwise (log|1/Gamma(y)|, sign of 1/Gamma(y)); poles give (-inf, 0)"""
    y = np.asarray(y, dtype=float)
    pole = (y <= 0) & (y == np.floor(y))
    safe = np.where(pole, 1.0, y)
    log_abs = np.where(pole, -np.inf, -special.gammaln(safe))
    sign = np.where(pole, 0.0, special.gammasgn(safe))
    return log_abs, sign
