# ---------------------------------------------------------------------------
# FILE: src/commands/common.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import click
from click.core import ParameterSource

from src import __version__
from src.core.config import DEFAULT_WORKERS, ModelConfig
from src.core.errors import ConfigError, TopoFactorError
from src.data import db
from src.data.persistence import build_manifest, input_hash, load_config, save_output

log = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

# parameters that never change the data file, so stay out of hashes and manifests
NOT_RECORDED = {"config_path", "out", "summary", "dump_trials", "workers"}

_CONFIG_FIELDS = {f.name for f in dataclasses.fields(ModelConfig)}


@dataclass
class Invocation:
    command: str
    args: dict
    config: ModelConfig
    presets: dict
    out: Optional[str]
    summary: bool = False
    workers: int = DEFAULT_WORKERS
    extras: dict = field(default_factory=dict)

    @property
    def input_hash(self) -> str:
        return input_hash(self.command, self.args, self.config, self.presets)


@dataclass
class Output:
    """Data text for stdout/--out, plus an optional human summary for stderr."""
    text: str
    summary: Optional[str] = None


# ---------- shared options ----------

def config_option(f):
    return click.option(
        "--config", "config_path", type=click.Path(dir_okay=False), default=None,
        help="Config JSON or a run manifest (falls back to $TOPOFACTOR_CONFIG).",
    )(f)


def out_option(f):
    return click.option(
        "--out", type=click.Path(dir_okay=False), default=None,
        help="Write data here (plus a .manifest.json sidecar) instead of stdout.",
    )(f)


def workers_option(f):
    return click.option(
        "--workers", type=click.IntRange(min=1), default=DEFAULT_WORKERS, show_default=True,
        help="Threads for grid points / trials; output does not depend on it.",
    )(f)


def key_length_option(default: int = 128):
    return click.option("--L", "L", type=click.IntRange(min=1), default=default, show_default=True,
                        help="Bit length of the number to factor.")


def eps_option(flag: str, dest: str, default: float, help: str):
    return click.option(flag, dest, type=click.FloatRange(min=0.0, max=1.0), default=default,
                        show_default=True, help=help)


# ---------- invocation ----------

def prepare(ctx: click.Context, command: str, params: dict) -> Invocation:
    """
    Resolve config (flag > config file > code default). A manifest's recorded
    args fill every parameter the user left at its default.
    """
    try:
        loaded = load_config(params.get("config_path"))
    except ConfigError as e:
        raise click.UsageError(str(e), ctx=ctx) from e

    merged = dict(params)
    if loaded.args:
        if loaded.command and loaded.command != command:
            log.warning("[config] manifest was written by %r, not %r; ignoring its args", loaded.command, command)
        else:
            for name, value in loaded.args.items():
                if name in merged and ctx.get_parameter_source(name) == ParameterSource.DEFAULT:
                    merged[name] = value

    cfg = loaded.config
    for name, value in list(merged.items()):
        if value is None and name in _CONFIG_FIELDS:
            merged[name] = getattr(cfg, name)

    return Invocation(
        command=command,
        args={k: v for k, v in merged.items() if k not in NOT_RECORDED},
        config=cfg,
        presets=loaded.presets,
        out=merged.get("out"),
        summary=bool(merged.get("summary")),
        workers=int(merged.get("workers") or DEFAULT_WORKERS),
        extras={k: v for k, v in merged.items() if k in NOT_RECORDED},
    )


def emit(inv: Invocation, output: Output) -> None:
    if output.summary and inv.summary:
        click.echo(output.summary, err=True, nl=False)
    if inv.out:
        manifest = build_manifest(inv.command, inv.args, inv.config, inv.presets, __version__)
        save_output(inv.out, output.text, manifest)
        log.info("[output] wrote %s", inv.out)
    else:
        click.echo(output.text, nl=False)


def execute(ctx: click.Context, command: str, params: dict, compute: Callable[[Invocation], Output]) -> None:
    """
    Run `compute` with the run ledger around it. ConfigError/ValueError exit 2;
    other model errors (regime C, non-convergence) exit 3.
    """
    inv = prepare(ctx, command, params)
    run_id = None
    if db.ledger_enabled():
        run_id = db.log_run_start(
            command=command, args=inv.args, input_hash=inv.input_hash,
            out_path=inv.out, version=__version__,
        )

    code = 0
    try:
        output = compute(inv)
        emit(inv, output)
    except click.ClickException:
        code = EXIT_USAGE
        raise
    except (ConfigError, ValueError) as e:
        code = EXIT_USAGE
        raise click.UsageError(str(e), ctx=ctx) from e
    except TopoFactorError as e:
        code = EXIT_INFEASIBLE
        click.secho(f"Error: {e}", fg="red", err=True)
    finally:
        if run_id is not None:
            db.log_run_end(run_id=run_id, exit_code=code)
    if code:
        ctx.exit(code)


