"""
Perturbation theory in the qubit splitting Delta.

Noninteger M: nondegenerate expansion around |n sigma> with energies
w(n + sigma M/2). Integer M: the pairs (|n-M>_+, |n>_-) are degenerate and
split in first order; states with n < M stay nondegenerate.

Energies are in the rotated-frame convention (ARM energy + g^2/w).
Observables follow from derivatives of the energy: d/d eps gives sigma_x,
d/d Delta gives sigma_z, d/d w gives a'a.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import DomainError, WrongCaseError
from rabi_asym.models import ModelParams, PTResult, StateLabel, ValidityReport
from rabi_asym.specfun.gamma import pole_distance
from rabi_asym.specfun.kernels import calF, calF_dx, calG, curly_C
from rabi_asym.specfun.polynomials import overlap_F, overlap_F_prime
from rabi_asym.specfun.types import EvalMethod, EvalResult

logger = logging.getLogger(__name__)

_ORDERS_NONINTEGER = {"energy": "Delta^2", "sx": "Delta^2", "sz": "Delta^1", "nbar": "Delta^2"}


@dataclass(frozen=True)
class CalFPartials:
    value: EvalResult
    d_x: EvalResult
    d_z: EvalResult


def _five_point(n: int, x: float, z: float, h: float) -> float:
    f = lambda t: calF(n, x, t).value
    return (f(z - 2 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2 * h)) / (12.0 * h)


def calF_partials(n: int, x: float, z: float) -> CalFPartials:
    """calF together with its x- and z-derivatives.

    d/dx is analytic (term-wise); d/dz is a five-point central difference
    with one Richardson step, the step scaled down near the poles.

    Raises:
        PoleError: z within pole_tol of a nonpositive integer
    """
    value = calF(n, x, z)
    d_x = calF_dx(n, x, z)

    h = get_settings().FD_STEP * min(1.0, pole_distance(z))
    coarse = _five_point(n, x, z, h)
    fine = _five_point(n, x, z, 0.5 * h)
    extrapolated = (16.0 * fine - coarse) / 15.0
    est = abs(fine - extrapolated) + 3.0 * value.est_error / h
    d_z = EvalResult(extrapolated, est, EvalMethod.CLOSED_FORM)
    return CalFPartials(value=value, d_x=d_x, d_z=d_z)


def validity(p: ModelParams) -> ValidityReport:
    """Regime flags for Delta << w <~ g and, for noninteger M, the resonance-aware bound"""
    settings = get_settings()
    ratio = settings.VALIDITY_RATIO
    integer = p.is_integer_case()
    report = dict(
        delta_tilde=p.delta_tilde,
        g_tilde=p.g_tilde,
        is_integer_case=integer,
        comm_ok=p.delta_tilde < ratio,
        coupling_ok=p.g_tilde >= settings.COUPLING_RATIO,
    )
    if not integer:
        delta_m = p.M - math.floor(p.M)
        xi = 2.0 * delta_m - 1.0
        threshold = math.sqrt((1.0 - abs(xi)) / 2.0)
        margin = p.delta_tilde / threshold if threshold > 0 else math.inf
        report.update(delta_m=delta_m, xi=xi, threshold=threshold, inco_margin=margin, inco_ok=margin < ratio)

    result = ValidityReport(**report)
    if not result.ok:
        logger.debug(f"Outside the perturbative regime: {result}")
    return result


def pt_noninteger(p: ModelParams, n: int, sigma: int) -> PTResult:
    """Second-order energy and observables of |n sigma> for noninteger M.

    Raises:
        WrongCaseError: M is an integer
        PoleError: -n - sigma M sits on a pole of calF
    """
    if p.is_integer_case():
        raise WrongCaseError(p.M, "noninteger")
    if n < 0 or sigma not in (1, -1):
        raise DomainError(f"invalid label n={n}, sigma={sigma}")

    w, g, d, M = p.omega, p.g_tilde, p.delta_tilde, p.M
    partials = calF_partials(n, 2.0 * g, -n - sigma * M)
    F, F_x, F_z = partials.value.value, partials.d_x.value, partials.d_z.value

    return PTResult(
        label=StateLabel(n, sigma, "sigma"),
        E0=w * (n + sigma * M / 2.0),
        E1=0.0,
        E2=-w * d * d * F,
        sx=sigma * (1.0 + 2.0 * d * d * F_z),
        sz=-2.0 * d * F,
        nbar=n + g * g + d * d * (F + 2.0 * g * F_x - sigma * M * F_z),
        frame_shift=p.frame_shift,
        validity=validity(p),
        orders=dict(_ORDERS_NONINTEGER),
    )


def pt_integer(p: ModelParams, n: int, alpha: int) -> PTResult:
    """Degenerate expansion for integer M; alpha = 0 for n < M, +1/-1 for n >= M.

    Raises:
        WrongCaseError: M is not an integer >= 1
        ZeroDivisorError: F_{n,n-M}(2g) vanishes, so sigma_x is undefined
    """
    M = p.integer_M()
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    w, g, d = p.omega, p.g_tilde, p.delta_tilde
    x = 2.0 * g
    label = StateLabel(n, alpha, "alpha")

    if n < M:
        if alpha != 0:
            raise DomainError(f"n={n} < M={M} requires alpha=0")
        F = calF(n, x, M - n).value
        return PTResult(
            label=label,
            E0=w * (n - M / 2.0),
            E1=0.0,
            E2=-w * d * d * F,
            sx=-1.0,
            sz=-2.0 * d * F,
            nbar=n + g * g,
            combined=n + g * g - M / 2.0,
            frame_shift=p.frame_shift,
            validity=validity(p),
            orders={"energy": "Delta^2", "sx": "Delta^1", "sz": "Delta^1", "nbar": "Delta^1", "combined": "Delta^1"},
        )

    if alpha not in (1, -1):
        raise DomainError(f"n={n} >= M={M} requires alpha=+1 or -1")
    F = overlap_F(n, n - M, x)
    G_sum = calG(n, n - M, x).value + calG(n - M, n, x).value
    C = curly_C(n, M, x).value
    return PTResult(
        label=label,
        E0=w * (n - M / 2.0),
        E1=alpha * w * d * F,
        E2=-0.5 * w * d * d * G_sum,
        sx=alpha * d * C,
        sz=alpha * F - d * G_sum,
        nbar=n + g * g - 0.5 * M * (1.0 + alpha * d * C),
        combined=n + g * g - M / 2.0 - 2.0 * alpha * g * d * overlap_F_prime(n, n - M, x),
        nbar_partial=True,
        frame_shift=p.frame_shift,
        validity=validity(p),
        orders={"energy": "Delta^2", "sx": "Delta^1", "sz": "Delta^1", "nbar": "Delta^0+partial", "combined": "Delta^1"},
    )


def pt_result(p: ModelParams, label: StateLabel) -> PTResult:
    if label.kind == "sigma":
        return pt_noninteger(p, label.n, label.branch)
    return pt_integer(p, label.n, label.branch)


def default_labels(p: ModelParams, count: Optional[int] = None) -> List[StateLabel]:
    """Lowest `count` unperturbed labels, ordered by E0 and then by the first-order shift.

    The default count is 4 for noninteger M and M + 1 for integer M.
    """
    if p.is_integer_case():
        M = p.integer_M()
        count = M + 1 if count is None else count
        x = 2.0 * p.g_tilde
        labels, n = [], 0
        while len(labels) < count:
            if n < M:
                labels.append((n, 0.0, StateLabel(n, 0, "alpha")))
            else:
                F = overlap_F(n, n - M, x)
                for alpha in (-1, 1):
                    labels.append((n, alpha * F, StateLabel(n, alpha, "alpha")))
            n += 1
        labels.sort(key=lambda item: (item[0], item[1], item[2].branch))
        return [item[2] for item in labels[:count]]

    count = 4 if count is None else count
    M = p.M
    candidates = [
        StateLabel(n, sigma, "sigma")
        for n in range(count + int(math.ceil(M)) + 1)
        for sigma in (-1, 1)
    ]
    candidates.sort(key=lambda s: (s.n + s.branch * M / 2.0, s.branch))
    return candidates[:count]
