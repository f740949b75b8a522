"""
specfun-eval: spot evaluation of one special function next to an independent oracle
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy import special

from rabi_asym.cli.output import CsvTable, standard_metadata
from rabi_asym.cli.schemas import RunConfig
from rabi_asym.core.errors import ConfigError
from rabi_asym.physics.fock import displacement_extended
from rabi_asym.specfun.kernels import (
    calF,
    calF_asymptotic,
    calF_series,
    calG,
    calG_asymptotic,
    calG_series,
    curly_C,
)
from rabi_asym.specfun.kummer import kummer_M, kummer_M_reg
from rabi_asym.specfun.polynomials import hermite2_terms, overlap_F
from rabi_asym.specfun.types import EvalMethod, EvalResult

logger = logging.getLogger(__name__)

_EPS = float(np.finfo(float).eps)

Args = Dict[str, float]


@dataclass(frozen=True)
class SpecFunction:
    """Argument names (integers first), optional trailing arguments and the two evaluators"""
    names: Tuple[str, ...]
    integer: Tuple[str, ...]
    optional: Dict[str, float]
    evaluate: Callable[[Args], EvalResult]
    oracle: Callable[[Args], float]


def _hermite2(a: Args) -> EvalResult:
    terms = hermite2_terms(a["n"], a["m"], a["x"], a["y"])
    return EvalResult(math.fsum(terms), 4.0 * _EPS * sum(abs(t) for t in terms), EvalMethod.CLOSED_FORM)


def _hermite2_exact(a: Args) -> float:
    n, m = a["n"], a["m"]
    x, y = Fraction(a["x"]), Fraction(a["y"])
    return float(sum(
        (-1) ** k * math.factorial(k) * math.comb(n, k) * math.comb(m, k) * x ** (n - k) * y ** (m - k)
        for k in range(min(n, m) + 1)
    ))


def _overlap(a: Args) -> EvalResult:
    return EvalResult(overlap_F(a["n_prime"], a["n"], a["x"]), 8.0 * _EPS, EvalMethod.CLOSED_FORM)


def _overlap_expm(a: Args) -> float:
    levels = max(a["n_prime"], a["n"]) + 1
    return float(displacement_extended(a["x"], levels)[a["n_prime"], a["n"]])


def _curly_C_series(a: Args) -> float:
    n, M, x = a["n"], a["M"], a["x"]
    numerator = calG_series(n, n - M, x).value - calG_series(n - M, n, x).value
    return numerator / (2.0 * overlap_F(n, n - M, x))


FUNCTIONS: Dict[str, SpecFunction] = {
    "hermite2": SpecFunction(("n", "m", "x", "y"), ("n", "m"), {}, _hermite2, _hermite2_exact),
    "overlap_F": SpecFunction(("n_prime", "n", "x"), ("n_prime", "n"), {}, _overlap, _overlap_expm),
    "kummer_M": SpecFunction(
        ("a", "b", "x"), (), {},
        lambda a: kummer_M(a["a"], a["b"], a["x"]),
        lambda a: float(special.hyp1f1(a["a"], a["b"], a["x"])),
    ),
    "kummer_M_reg": SpecFunction(
        ("a", "b", "x"), (), {},
        lambda a: kummer_M_reg(a["a"], a["b"], a["x"]),
        lambda a: float(special.hyp1f1(a["a"], a["b"], a["x"]) * special.rgamma(a["b"])),
    ),
    "calF": SpecFunction(
        ("n", "x", "z"), ("n",), {},
        lambda a: calF(a["n"], a["x"], a["z"]),
        lambda a: calF_series(a["n"], a["x"], a["z"]).value,
    ),
    "calF_asym": SpecFunction(
        ("n", "x", "z", "order"), ("n", "order"), {"order": 1},
        lambda a: calF_asymptotic(a["n"], a["x"], a["z"], a["order"]),
        lambda a: calF(a["n"], a["x"], a["z"]).value,
    ),
    "calG": SpecFunction(
        ("p", "q", "x"), ("p", "q"), {},
        lambda a: calG(a["p"], a["q"], a["x"]),
        lambda a: calG_series(a["p"], a["q"], a["x"]).value,
    ),
    "calG_asym": SpecFunction(
        ("p", "q", "x", "order", "gated"), ("p", "q", "order", "gated"), {"order": 1, "gated": 0},
        lambda a: calG_asymptotic(a["p"], a["q"], a["x"], a["order"], bool(a["gated"])),
        lambda a: calG(a["p"], a["q"], a["x"]).value,
    ),
    "curly_C": SpecFunction(
        ("n", "M", "x"), ("n", "M"), {},
        lambda a: curly_C(a["n"], a["M"], a["x"]),
        _curly_C_series,
    ),
}


def parse_args(func: SpecFunction, name: str, values: Sequence[float]) -> Args:
    required = len(func.names) - len(func.optional)
    if not required <= len(values) <= len(func.names):
        raise ConfigError(
            f"{name} takes {required} to {len(func.names)} arguments ({' '.join(func.names)}), got {len(values)}"
        )
    args: Args = dict(func.optional)
    args.update(zip(func.names, values))
    for key in func.integer:
        v = args[key]
        if v != int(v):
            raise ConfigError(f"{name}: argument {key} must be an integer, got {v}")
        args[key] = int(v)
    return args


def run(cfg: RunConfig) -> CsvTable:
    name = cfg.function
    if name not in FUNCTIONS:
        raise ConfigError(f"unknown function {name!r}; choose from {', '.join(sorted(FUNCTIONS))}")
    func = FUNCTIONS[name]
    args = parse_args(func, name, cfg.args)

    result = func.evaluate(args)
    oracle = func.oracle(args)
    diff = abs(result.value - oracle)
    logger.debug(f"{name}{tuple(args.values())} = {result.value!r} via {result.method.value}, oracle {oracle!r}")

    columns: List[str] = list(func.names) + ["value", "est_error", "method", "oracle_value", "abs_diff"]
    table = CsvTable(columns=columns, metadata=standard_metadata(cfg))
    table.add_row(
        **args,
        value=result.value,
        est_error=result.est_error,
        method=result.method.value,
        oracle_value=oracle,
        abs_diff=diff,
    )
    return table
