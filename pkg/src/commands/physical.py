# ---------------------------------------------------------------------------
# FILE: src/commands/physical.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import dataclasses

import click

from src.commands.common import Invocation, Output, config_option, execute, out_option
from src.core.physical import physical_report, resolve_preset
from src.data.persistence import to_json_text


def _physical(inv: Invocation) -> Output:
    a = inv.args
    params = resolve_preset(a["preset"], inv.presets)
    report = physical_report(a["n_qp"], a["time_steps"], params)
    data = {
        "preset": a["preset"],
        "params": dataclasses.asdict(params),
        "n_qp": a["n_qp"],
        "time_steps": a["time_steps"],
        "report": report.to_dict(),
    }
    return Output(to_json_text(data))


@click.command(name="physical")
@click.option("--preset", default="nu52", show_default=True, help="nu52, nu125, or one from the config file.")
@click.option("--time-steps", type=click.FloatRange(min=0.0), default=1e11, show_default=True)
@click.option("--n-qp", type=click.FloatRange(min=0.0), default=3e9, show_default=True,
              help="Quasiparticle count for the sample area.")
@config_option
@out_option
@click.pass_context
def physical(ctx, **params):
    """Field bound, drift velocity, step rate, sample area and wall clock."""
    execute(ctx, "physical", params, _physical)


def setup(cli: click.Group) -> None:
    cli.add_command(physical)
