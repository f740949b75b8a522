"""
CSV tables with '#' metadata lines, and the companion plot scripts.
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from rabi_asym import __version__
from rabi_asym.cli.schemas import RunConfig, format_number
from rabi_asym.core.errors import ConfigError

logger = logging.getLogger(__name__)

ENERGY_CONVENTION = "ARM (H as given); rotated-frame energies are ARM + g^2/omega"


@dataclass
class CsvTable:
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    metadata: List[str] = field(default_factory=list)

    def add_row(self, **values: Any) -> None:
        missing = set(self.columns) - set(values)
        if missing:
            raise ConfigError(f"row lacks columns {sorted(missing)}")
        self.rows.append(values)

    def column(self, name: str) -> List[Any]:
        return [row[name] for row in self.rows]


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format_number(value)
    if value is None:
        return ""
    return str(value)


def standard_metadata(
    cfg: RunConfig,
    n_max: Optional[int] = None,
    convergence: Optional[str] = None,
    extra: Sequence[str] = (),
) -> List[str]:
    lines = [
        f"rabi-asym {__version__}",
        f"subcommand: {cfg.subcommand}",
        f"config: {cfg.to_header()}",
    ]
    if n_max is not None:
        lines.append(f"n_max: {n_max}")
    if convergence is not None:
        lines.append(f"convergence: {convergence}")
    lines.append(f"energy convention: {ENERGY_CONVENTION}")
    lines.extend(extra)
    return lines


def write_table(table: CsvTable, stream: TextIO) -> None:
    for line in table.metadata:
        stream.write(f"# {line}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(row[name]) for name in table.columns])


_PLOT_TEMPLATE = '''"""Plot {csv_name} (written by rabi-asym {version})"""
import matplotlib.pyplot as plt
import numpy as np

data = np.genfromtxt("{csv_name}", delimiter=",", comments="#", names=True, dtype=None, encoding="utf-8")
fig, axes = plt.subplots(1, {panels}, figsize=({width}, 4))
{body}
fig.tight_layout()
fig.savefig("{stem}.png", dpi=200)
plt.show()
'''

_SWEEP_BODY = '''for level in np.unique(data["level"]):
    rows = data[data["level"] == level]
    axes[0].plot(rows["g"], rows["energy"], lw=1)
    axes[1].plot(rows["g"], rows["sx"], lw=1)
    axes[2].plot(rows["g"], rows["sz"], lw=1)
for ax, name in zip(axes, ["energy", "<sigma_x>", "<sigma_z>"]):
    ax.set_xlabel("g / omega")
    ax.set_ylabel(name)'''

_PT_BODY = '''x = "{axis}"
for label in np.unique(data["level_label"]):
    rows = data[data["level_label"] == label]
    axes[0].plot(rows[x], rows["E_ed"], lw=1, label=str(label))
    axes[0].plot(rows[x], rows["E_pt"], "--", lw=1)
    axes[1].plot(rows[x], rows["{second}"], lw=1)
axes[0].set_ylabel("energy")
axes[1].set_ylabel("{second}")
axes[1].set_yscale("{scale}")
for ax in axes:
    ax.set_xlabel(x)
axes[0].legend(fontsize=7)'''


def plot_script(csv_path: Path, kind: str) -> str:
    """Text of a matplotlib script that plots the CSV next to it"""
    if kind == "sweep":
        body, panels = _SWEEP_BODY, 3
    elif kind == "pt-compare":
        body, panels = _PT_BODY.format(axis="g", second="sx_ed", scale="linear"), 2
    elif kind == "pt-compare-delta":
        body, panels = _PT_BODY.format(axis="delta", second="abs_error", scale="log"), 2
    else:
        raise ConfigError(f"no plot script for {kind!r}")
    return _PLOT_TEMPLATE.format(
        csv_name=csv_path.name,
        stem=csv_path.stem,
        version=__version__,
        panels=panels,
        width=4 * panels,
        body=body,
    )


def write_outputs(table: CsvTable, output: Optional[str], stdout: TextIO, plot_kind: Optional[str] = None) -> None:
    """CSV to `output` (plus `<stem>_plot.py` when a plot kind is given) or to stdout"""
    if output is None:
        write_table(table, stdout)
        return
    path = Path(output)
    with path.open("w", encoding="utf-8", newline="") as f:
        write_table(table, f)
    logger.info(f"Wrote {len(table.rows)} rows to {path}")
    if plot_kind is not None:
        script = path.with_name(f"{path.stem}_plot.py")
        script.write_text(plot_script(path, plot_kind), encoding="utf-8")
        logger.info(f"Wrote plot script {script}")
