"""
parent-check: verify the analytic eigenpairs of the parent Hamiltonian and
the number-conserving part of its coupling in a truncated basis.
"""
import logging
import math
from typing import List, Optional, Tuple

from rabi_asym.cli.output import CsvTable, standard_metadata
from rabi_asym.cli.schemas import RunConfig
from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import TruncationError
from rabi_asym.models import ModelParams
from rabi_asym.physics.eigensolver import default_n_max
from rabi_asym.physics.fock import build_basis
from rabi_asym.physics.parent import (
    FChoice,
    f_tilde_diag,
    f_tilde_geometric,
    f_tilde_matrix,
    first_order_shifts,
    headroom,
    parent_eigensystem,
    parent_hamiltonian,
    special_constant,
)

logger = logging.getLogger(__name__)

COLUMNS = ["section", "n", "alpha", "value", "reference", "deviation"]


def f_choice(cfg: RunConfig, p: ModelParams) -> FChoice:
    if cfg.f_kind == "special":
        return FChoice.special()
    if cfg.f_kind == "geometric":
        return FChoice.geometric(special_constant(p), cfg.s)
    return FChoice.zero()


def f_tilde_reference(n: int, p: ModelParams, cfg: RunConfig) -> float:
    if cfg.f_kind == "special":
        return p.delta
    if cfg.f_kind == "geometric":
        return f_tilde_geometric(n, p, cfg.s)
    return 0.0


def parent_n_max(p: ModelParams, n_limit: int) -> int:
    g2 = p.g_tilde ** 2
    return max(
        default_n_max(p),
        int(math.ceil(40.0 * (1.0 + g2))),
        n_limit + p.integer_M() + int(math.ceil(10.0 * g2)) + 20,
    )


def run(cfg: RunConfig) -> Tuple[CsvTable, str]:
    """CSV of every check plus a short text report of the worst deviations"""
    p = cfg.params
    M = p.integer_M()
    f = f_choice(cfg, p)
    n_max = cfg.n_max if cfg.n_max is not None else parent_n_max(p, cfg.n_limit)
    if n_max + 1 > get_settings().NMAX_CAP:
        raise TruncationError(n_max, f"parent check needs more than the cap {get_settings().NMAX_CAP}")
    b = build_basis(n_max)
    logger.info(f"parent-check M={M}, g~={p.g_tilde:.6g}, f={cfg.f_kind}, n_max={n_max}, n <= {cfg.n_limit}")

    table = CsvTable(columns=COLUMNS, metadata=standard_metadata(cfg, n_max=n_max, convergence="fixed n_max"))

    def add(section: str, n: int, alpha: Optional[int], value: float, reference: float) -> None:
        table.add_row(section=section, n=n, alpha=alpha, value=value, reference=reference, deviation=abs(value - reference))

    pairs = parent_eigensystem(p, f, b, cfg.n_limit)
    H = parent_hamiltonian(p, f, b)
    for pair in pairs:
        add("residual", pair.label.n, pair.label.branch, pair.residual, 0.0)
    for pair in pairs:
        add("energy", pair.label.n, pair.label.branch, float(pair.state @ H @ pair.state), pair.energy)

    for n in range(cfg.n_limit + 1):
        add("f_tilde", n, None, f_tilde_diag(n, p, f), f_tilde_reference(n, p, cfg))

    for n in range(min(cfg.n_limit, headroom(p, b)) + 1):
        add("f_tilde_matrix", n, None, f_tilde_matrix(n, p, f, b), f_tilde_diag(n, p, f))

    for label, shift, reference in first_order_shifts(p, b, cfg.n_limit):
        add("first_order", label.n, label.branch, shift, reference)

    return table, report(table, n_max, M)


def _worst(table: CsvTable, section: str) -> Tuple[float, int]:
    rows = [row for row in table.rows if row["section"] == section]
    if not rows:
        return math.nan, 0
    return max(row["deviation"] for row in rows), len(rows)


def report(table: CsvTable, n_max: int, M: int) -> str:
    lines: List[str] = [f"parent Hamiltonian check, M={M}, n_max={n_max}"]
    for section, what in [
        ("residual", "max eigenpair residual ||H'psi - E'psi||"),
        ("energy", "max |<psi|H'|psi> - E'|"),
        ("f_tilde", "max |f~(n) - reference|"),
        ("f_tilde_matrix", "max |matrix element - series|"),
        ("first_order", "max |<n;a|H|n;a> - E0 - a Delta F|"),
    ]:
        worst, count = _worst(table, section)
        lines.append(f"  {what:<42} {worst:.3e}  ({count} rows)")
    return "\n".join(lines)
