import importlib
import logging

import click
from dotenv import load_dotenv

# env-driven constants in src.core.config are read at import time
load_dotenv()

from src import __version__  # noqa: E402
from src.core.config import LOG_LEVEL  # noqa: E402
from src.data.db import init_ledger  # noqa: E402

log = logging.getLogger(__name__)

COMMAND_MODULES = (
    "src.commands.estimate",
    "src.commands.sweep",
    "src.commands.montecarlo",
    "src.commands.physical",
    "src.commands.history",
)


def _setup_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug logging (stderr).")
@click.version_option(__version__, prog_name="topofactor")
def cli(verbose: int):
    """Space/time resource estimates for Shor's algorithm on Ising and Fibonacci anyons."""
    _setup_logging(verbose)
    if init_ledger():
        log.info("[ledger] recording runs")


def register_commands(group: click.Group) -> None:
    for name in COMMAND_MODULES:
        module = importlib.import_module(name)
        module.setup(group)


register_commands(cli)


def main() -> None:
    cli(prog_name="topofactor")


if __name__ == "__main__":
    main()
