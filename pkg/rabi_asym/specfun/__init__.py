from rabi_asym.specfun.kernels import (
    calF,
    calF_asymptotic,
    calF_series,
    calG,
    calG_asymptotic,
    calG_series,
    curly_C,
    pole_residue,
)
from rabi_asym.specfun.kummer import kummer_M, kummer_M_reg
from rabi_asym.specfun.polynomials import hermite2, laguerre, overlap_F
from rabi_asym.specfun.types import EvalMethod, EvalResult

__all__ = [
    "EvalMethod",
    "EvalResult",
    "calF",
    "calF_asymptotic",
    "calF_series",
    "calG",
    "calG_asymptotic",
    "calG_series",
    "curly_C",
    "hermite2",
    "kummer_M",
    "kummer_M_reg",
    "laguerre",
    "overlap_F",
    "pole_residue",
]
