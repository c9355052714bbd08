# ---------------------------------------------------------------------------
# FILE: src/commands/history.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import click

from src.data.db import ledger_enabled, recent_runs, runs_with_hash
from src.ui.report_format import format_history


@click.command(name="history")
@click.option("--limit", type=int, default=10, show_default=True, help="How many rows (max 50).")
@click.option("--command", "command_name", default=None, help="Only runs of this command, e.g. 'sweep'.")
def history(limit: int, command_name: str | None):
    """Show recent runs from the ledger ($TOPOFACTOR_LEDGER)."""
    if not ledger_enabled():
        raise click.UsageError("run ledger is off; set TOPOFACTOR_LEDGER to a sqlite path")
    limit = max(1, min(50, limit))
    rows = recent_runs(limit=limit, command=command_name)
    for row in rows:
        earlier = [r["run_id"] for r in runs_with_hash(input_hash=row["input_hash"]) if r["run_id"] < row["run_id"]]
        row["repeat_of"] = earlier[0] if earlier else None
    click.echo(format_history(rows), nl=False)


def setup(cli: click.Group) -> None:
    cli.add_command(history)
