from dataclasses import dataclass
from enum import Enum


class EvalMethod(str, Enum):
    """Evaluation route used for a special-function value"""
    SERIES = "series"
    CLOSED_FORM = "closed_form"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class EvalResult:
    """A value with an error estimate and the route that produced it"""
    value: float
    est_error: float
    method: EvalMethod

    def __float__(self) -> float:
        return self.value
