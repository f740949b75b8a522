"""
Exception hierarchy shared by the physics, specfun and CLI layers
"""
from dataclasses import dataclass
from typing import Optional


class RabiError(Exception):
    """Base class for all toolkit errors"""
    pass


class PoleError(RabiError):
    """Raised when a parameter sits on (or within pole_tol of) a pole"""
    def __init__(self, location: float, what: str = "z"):
        self.location = location
        self.what = what
        super().__init__(
            f"{what}={location!r} is within pole tolerance of a nonpositive integer"
        )


class TruncationError(RabiError):
    """Raised when the Fock truncation is too small for the requested object"""
    def __init__(self, n_max: int, detail: str):
        self.n_max = n_max
        self.detail = detail
        super().__init__(f"Truncation n_max={n_max} insufficient: {detail}")


class ConvergenceError(RabiError):
    """Raised when a series, an eigensolver or adaptive truncation fails to converge"""
    def __init__(self, detail: str, iterations: Optional[int] = None):
        self.detail = detail
        self.iterations = iterations
        suffix = f" after {iterations} iterations" if iterations is not None else ""
        super().__init__(f"No convergence{suffix}: {detail}")


class DomainError(RabiError, ValueError):
    """Arguments outside the domain where an evaluation route is defined"""
    pass


class WrongCaseError(RabiError, ValueError):
    """Integer-M routine called with noninteger M, or the reverse"""
    def __init__(self, M: float, expected: str):
        self.M = M
        self.expected = expected
        super().__init__(f"M={M!r} does not belong to the {expected} case")


class ZeroDivisorError(RabiError, ZeroDivisionError):
    """Denominator F_{n,n-M}(x) vanishes within zero_tol"""
    def __init__(self, n: int, M: int, x: float):
        self.n = n
        self.M = M
        self.x = x
        super().__init__(f"F_{{{n},{n - M}}}({x!r}) is zero within tolerance")


class ConfigError(RabiError):
    """Invalid command-line configuration"""
    pass


@dataclass(frozen=True)
class TrackingBreak:
    """Adjacent grid points whose best eigenvector overlap fell below the threshold"""
    index: int
    g: float
    curve: int
    overlap: float
