from dataclasses import dataclass, field
from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import WrongCaseError


class ModelParams(BaseModel):
    """Physical parameters of H = w a'a + g(a'+a)sx + eps sx + Delta sz"""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(1.0, gt=0, description="Oscillator frequency, the unit of energy")
    g: float = Field(0.0, ge=0, description="Qubit-oscillator coupling")
    epsilon: float = Field(0.0, ge=0, description="Asymmetry (bias) coefficient of sigma_x")
    delta: float = Field(0.0, ge=0, description="Qubit splitting, coefficient of sigma_z")

    @property
    def M(self) -> float:
        return 2.0 * self.epsilon / self.omega

    @property
    def g_tilde(self) -> float:
        return self.g / self.omega

    @property
    def delta_tilde(self) -> float:
        return self.delta / self.omega

    @property
    def frame_shift(self) -> float:
        """Constant g^2/omega separating rotated-frame and ARM energies"""
        return self.g * self.g / self.omega

    def is_integer_case(self, integer_tol: Optional[float] = None) -> bool:
        tol = get_settings().INTEGER_TOL if integer_tol is None else integer_tol
        nearest = round(self.M)
        return abs(self.M - nearest) < tol and nearest >= 1

    def integer_M(self) -> int:
        """M as an integer; raises WrongCaseError outside the integer case"""
        if not self.is_integer_case():
            raise WrongCaseError(self.M, "integer")
        return int(round(self.M))

    def with_values(self, **updates: float) -> "ModelParams":
        return ModelParams(**{**self.model_dump(), **updates})


@dataclass(frozen=True)
class StateLabel:
    """Perturbative label (n, sigma) for noninteger M or (n, alpha) for integer M"""
    n: int
    branch: int
    kind: Literal["sigma", "alpha"]

    def __str__(self) -> str:
        sign = {1: "+", -1: "-", 0: "0"}[self.branch]
        if self.kind == "sigma":
            return f"{self.n}{sign}"
        return f"{self.n};{sign}"


@dataclass(frozen=True)
class ValidityReport:
    """A-priori regime flags; advisory only, never gate a computation"""
    delta_tilde: float
    g_tilde: float
    is_integer_case: bool
    comm_ok: bool
    coupling_ok: bool
    delta_m: Optional[float] = None
    xi: Optional[float] = None
    threshold: Optional[float] = None
    inco_margin: Optional[float] = None
    inco_ok: Optional[bool] = None

    @property
    def comm_margin(self) -> float:
        return self.delta_tilde

    @property
    def ok(self) -> bool:
        return self.comm_ok and self.coupling_ok and self.inco_ok is not False


@dataclass(frozen=True)
class PTResult:
    """Perturbative energy terms and observables for one labeled state.

    Energies are in the rotated-frame convention (ARM energy + g^2/omega);
    `energy_arm` removes the shift. Observable values are the raw formula
    values, `breakdown` flags spin expectations outside [-1, 1].
    """
    label: StateLabel
    E0: float
    E1: float
    E2: float
    sx: float
    sz: float
    nbar: float
    frame_shift: float
    validity: ValidityReport
    combined: Optional[float] = None
    nbar_partial: bool = False
    orders: Dict[str, str] = field(default_factory=dict)

    @property
    def energy(self) -> float:
        return self.E0 + self.E1 + self.E2

    @property
    def energy_arm(self) -> float:
        return self.energy - self.frame_shift

    @property
    def breakdown(self) -> bool:
        return abs(self.sx) > 1.0 or abs(self.sz) > 1.0
