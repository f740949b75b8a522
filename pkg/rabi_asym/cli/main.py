"""
Command-line entry point.

    rabi-asym sweep --epsilon 0.25 --delta 0.3 --g 0:3:0.02 --levels 6
    rabi-asym pt-compare --epsilon 0.25 --delta 0.3 --g 1:3:0.1
    rabi-asym parent-check --epsilon 0.5 --delta 0.3 --g 1
    rabi-asym specfun-eval calF 0 1 1

Exit codes: 0 success, 2 truncation or convergence failure, 3 invalid
configuration or arguments outside a function's domain.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from pydantic import ValidationError

from rabi_asym import __version__
from rabi_asym.cli.commands import parent_check, pt_compare, specfun_eval, sweep
from rabi_asym.cli.output import write_outputs
from rabi_asym.cli.schemas import GridSpec, RunConfig
from rabi_asym.core.config import get_settings
from rabi_asym.core.errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    PoleError,
    TruncationError,
    WrongCaseError,
    ZeroDivisorError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_CONFIG = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _model_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model parameters (energies in the same unit as --omega)")
    group.add_argument("--omega", type=float, default=1.0, help="oscillator frequency (default 1)")
    group.add_argument("--epsilon", type=float, default=0.0, help="bias of sigma_x; M = 2 epsilon / omega")
    group.add_argument("--delta", type=float, default=0.0, help="qubit splitting, coefficient of sigma_z")
    group.add_argument("--g", default=None, help="coupling: a value or a grid start:stop:step")


def _run_flags(parser: argparse.ArgumentParser, levels: bool = True) -> None:
    if levels:
        parser.add_argument("--levels", type=int, default=None, dest="n_levels", help="number of levels")
    parser.add_argument("--n-max", type=int, default=None, help="fixed Fock truncation instead of the adaptive one")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (0 = all cores)")
    parser.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")


def build_parser(prog: Optional[str] = None) -> argparse.ArgumentParser:
    prog = prog or get_settings().APP_NAME
    parser = _ArgumentParser(prog=prog, description="Asymmetric quantum Rabi model: ED, perturbation theory, parent Hamiltonian")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("sweep", help="ED level curves and observables along g")
    _model_flags(p)
    _run_flags(p)
    p.add_argument("--energy-rotated", action="store_true", help="add the energy + g^2/omega column")

    p = sub.add_parser("pt-compare", help="ED against perturbation theory in Delta")
    _model_flags(p)
    _run_flags(p)
    p.add_argument("--delta-grid", default=None, help="sweep Delta (start:stop:step) at a single --g")

    p = sub.add_parser("parent-check", help="verify the parent Hamiltonian (integer M)")
    _model_flags(p)
    _run_flags(p, levels=False)
    p.add_argument("--f", dest="f_kind", choices=["special", "geometric", "zero"], default="special")
    p.add_argument("--s", type=float, default=1.0, help="ratio of the geometric f")
    p.add_argument("--n-limit", type=int, default=20, help="largest n to check")

    p = sub.add_parser("specfun-eval", help="evaluate one special function against its oracle")
    p.add_argument("function", help=", ".join(sorted(specfun_eval.FUNCTIONS)))
    p.add_argument("args", nargs="*", type=float)
    p.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    """RunConfig from parsed flags; the --g flag fills both g and g_grid"""
    values = {k: v for k, v in vars(ns).items() if k not in ("verbose", "output", "g") and v is not None}
    g_text = getattr(ns, "g", None)
    if g_text is not None:
        grid = GridSpec.parse(g_text)
        values["g"] = grid.start if grid.step is None else grid.stop
        values["g_grid"] = grid
    if getattr(ns, "delta_grid", None) is not None:
        values["delta_grid"] = GridSpec.parse(ns.delta_grid)
    return RunConfig(**values)


def setup_logging(verbose: bool, level: str) -> None:
    level = logging.DEBUG if verbose else level
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def execute(cfg: RunConfig, output: Optional[str], stdout: TextIO, stderr: TextIO) -> None:
    if cfg.subcommand == "sweep":
        write_outputs(sweep.run(cfg), output, stdout, plot_kind="sweep")
    elif cfg.subcommand == "pt-compare":
        kind = "pt-compare-delta" if cfg.delta_grid is not None else "pt-compare"
        write_outputs(pt_compare.run(cfg), output, stdout, plot_kind=kind)
    elif cfg.subcommand == "parent-check":
        table, report = parent_check.run(cfg)
        write_outputs(table, output, stdout)
        print(report, file=stdout if output is not None else stderr)
    else:
        write_outputs(specfun_eval.run(cfg), output, stdout)


def main(
    argv: Optional[List[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        settings = get_settings()
    except ValidationError as e:
        print(f"Invalid RABI_ASYM_* settings: {e}", file=stderr)
        return EXIT_CONFIG
    ns = build_parser(settings.APP_NAME).parse_args(argv)
    setup_logging(ns.verbose, settings.LOG_LEVEL)

    try:
        cfg = config_from_args(ns)
        if ns.output is not None and not Path(ns.output).parent.exists():
            raise ConfigError(f"output directory {Path(ns.output).parent} does not exist")
        execute(cfg, ns.output, stdout, stderr)
    except (ConvergenceError, TruncationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_NUMERICAL
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except (ConfigError, DomainError, WrongCaseError, PoleError, ZeroDivisorError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
