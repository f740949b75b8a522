"""
sweep: exact-diagonalization level curves and spin/number observables along g
"""
import logging

from rabi_asym.cli.output import CsvTable, standard_metadata
from rabi_asym.cli.schemas import GridSpec, RunConfig
from rabi_asym.physics.spectral_graph import detect_degeneracies, sweep

logger = logging.getLogger(__name__)

DEFAULT_GRID = "0:3:0.02"
DEFAULT_LEVELS = 6
COLUMNS = ["g", "level", "energy", "sx", "sz", "nbar", "tracked_ok"]


def run(cfg: RunConfig) -> CsvTable:
    grid = cfg.g_grid or GridSpec.parse(DEFAULT_GRID)
    n_levels = cfg.n_levels or DEFAULT_LEVELS
    p = cfg.params

    sg = sweep(p, grid.values(), n_levels, n_max=cfg.n_max, jobs=cfg.jobs)
    crossings = detect_degeneracies(sg)

    columns = list(COLUMNS)
    if cfg.energy_rotated:
        columns.insert(3, "energy_rotated")

    convergence = sg.report.summary() if sg.report is not None else "fixed n_max from --n-max"
    extra = [f"tracking breaks: {len(sg.breaks)}", f"degeneracies: {len(crossings)}"]
    extra.extend(
        f"degeneracy: g={c.g:.12g} curves={c.curves[0]},{c.curves[1]} gap={c.gap:.3e}" for c in crossings
    )
    table = CsvTable(
        columns=columns,
        metadata=standard_metadata(cfg, n_max=sg.n_max, convergence=convergence, extra=extra),
    )
    for row in sg.rows():
        if cfg.energy_rotated:
            row["energy_rotated"] = row["energy"] + row["g"] ** 2 / p.omega
        table.add_row(**row)

    logger.info(f"sweep: {len(table.rows)} rows, {len(sg.breaks)} tracking breaks, {len(crossings)} degeneracies")
    return table
