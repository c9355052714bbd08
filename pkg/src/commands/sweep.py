# ---------------------------------------------------------------------------
# FILE: src/commands/sweep.py
# ---------------------------------------------------------------------------
"""
Figure data as CSV. One row per grid point, written in grid order.

fig1a  |a8> single-state cost against eps0, one curve per target
fig1b  |a4> single-state cost against eps0_a4 (|a4> and |a8> qubits apart)
fig2   whole-run totals against each initial error, the other pinned at 0.01
fig3   regime scan over eps0_a8 at L=512
fig4   Fibonacci time against L
custom L x eps0_a4 x eps0_a8 product grid
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Iterable, Sequence

import click

from src.commands.common import (
    Invocation,
    Output,
    config_option,
    execute,
    out_option,
    workers_option,
)
from src.core.config import ModelConfig
from src.core.distillation import a4_plan, a8_plan, monotonize
from src.core.errors import AboveThreshold
from src.core.fib_compile import fib_row
from src.core.gate_budget import gate_counts
from src.core.ising_schedule import MODES, REGIME_C, SchedulePolicy, algorithm_time, classify_and_schedule
from src.ui.report_format import format_csv
from src.utils.grid import ordered_map, parse_grid

log = logging.getLogger(__name__)

FIGURES = ("fig1a", "fig1b", "fig2", "fig3", "fig4", "custom")
FIG1_TARGETS = (1e-9, 1e-11, 1e-13)
FIG2_L = (128, 256, 512)
PINNED_EPS = 0.01

DEFAULT_GRIDS = {
    "fig1a": "0.005:0.375:0.005",
    "fig1b": "0.002:0.138:0.002",
    "fig2_a4": "0.005:0.135:0.005",
    "fig2_a8": "0.005:0.375:0.005",
    "fig3": "0.01:0.37:0.01",
    "fig4": "16:4096:8",
}

FIG1A_COLUMNS = ["target", "eps0", "rounds", "expected_raw", "qubits_peak", "time_steps"]
FIG1B_COLUMNS = ["target", "eps0_a4", "eps0_a8", "rounds", "qubits_a4", "qubits_a8", "qubits_peak", "time_steps"]
SCHEDULE_COLUMNS = [
    "L", "eps0_a4", "eps0_a8", "regime", "total_qubits", "total_anyons",
    "t_alg", "t_dist", "t_total", "measurement_fraction",
]
FIG2_COLUMNS = ["series"] + SCHEDULE_COLUMNS
FIG4_COLUMNS = ["L", "n_total", "eps_required", "base_length", "n_sk", "total_length", "time_steps"]


def _monotonize_columns(rows: list[dict], x: str, columns: Sequence[str]) -> list[dict]:
    """Running max of each cost column over increasing x, within one curve."""
    for col in columns:
        curve = monotonize([(r[x], r[col]) for r in rows])
        for r, (_, value) in zip(rows, curve):
            r[col] = value
    return rows


def _by_curve(rows: list[dict], keys: Sequence[str]) -> Iterable[list[dict]]:
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault(tuple(r[k] for k in keys), []).append(r)
    return groups.values()


def _below_cap(grid: list[float], cap: float) -> list[float]:
    kept = [e for e in grid if e < cap]
    if len(kept) < len(grid):
        log.warning("[sweep] dropped %d grid points at or above the cap %g", len(grid) - len(kept), cap)
    return kept


# ---------- row builders ----------

def _fig1a_row(cfg: ModelConfig, target: float, eps0: float) -> dict:
    plan = a8_plan(eps0, target, cfg)
    return {
        "target": target,
        "eps0": eps0,
        "rounds": plan.rounds,
        "expected_raw": plan.expected_raw,
        "qubits_peak": plan.qubits_peak,
        "time_steps": plan.time_steps,
    }


def _fig1b_row(cfg: ModelConfig, target: float, eps0_a4: float, eps0_a8: float) -> dict:
    plan = a4_plan(eps0_a4, eps0_a8, target, cfg)
    return {
        "target": target,
        "eps0_a4": eps0_a4,
        "eps0_a8": eps0_a8,
        "rounds": plan.rounds,
        "qubits_a4": plan.own_qubits,
        "qubits_a8": plan.ancilla_qubits,
        "qubits_peak": plan.qubits_peak,
        "time_steps": plan.time_steps,
    }


def schedule_row(cfg: ModelConfig, policy: SchedulePolicy, L: int, eps0_a4: float, eps0_a8: float) -> dict:
    """One schedule row; an input at or above a cap is a regime C row, not an abort."""
    try:
        r = classify_and_schedule(L, eps0_a4, eps0_a8, policy, cfg)
    except AboveThreshold as e:
        log.info("[sweep] L=%d eps0=%g/%g: %s", L, eps0_a4, eps0_a8, e)
        return {
            "L": L, "eps0_a4": eps0_a4, "eps0_a8": eps0_a8, "regime": REGIME_C,
            "total_qubits": math.inf, "total_anyons": math.inf,
            "t_alg": algorithm_time(gate_counts(L, cfg), cfg),
            "t_dist": math.inf, "t_total": math.inf, "measurement_fraction": math.nan,
        }
    return {
        "L": L,
        "eps0_a4": eps0_a4,
        "eps0_a8": eps0_a8,
        "regime": r.regime,
        "total_qubits": r.total_qubits,
        "total_anyons": r.total_anyons,
        "t_alg": r.t_alg,
        "t_dist": r.t_dist,
        "t_total": r.t_total,
        "measurement_fraction": r.measurement_fraction,
    }


# ---------- figures ----------

def _grid(text: str | None, fallback: str, *, integer: bool = False) -> list:
    try:
        return parse_grid(fallback if text is None else text, integer=integer)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def _targets(a: dict) -> tuple[float, ...]:
    return (a["target"],) if a["target"] is not None else FIG1_TARGETS


def _fig1a(inv: Invocation, run: Callable) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    grid = _below_cap(_grid(a["eps_grid"], DEFAULT_GRIDS["fig1a"]), cfg.a8_input_cap)
    points = [(t, e) for t in _targets(a) for e in grid]
    rows = run(lambda p: _fig1a_row(cfg, *p), points)
    if not a["raw"]:
        for curve in _by_curve(rows, ["target"]):
            _monotonize_columns(curve, "eps0", ["expected_raw", "qubits_peak", "time_steps"])
    return FIG1A_COLUMNS, rows


def _fig1b(inv: Invocation, run: Callable) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    grid = _below_cap(_grid(a["eps_grid"], DEFAULT_GRIDS["fig1b"]), cfg.a4_input_cap)
    eps8 = a["eps_a8"]
    points = [(t, e) for t in _targets(a) for e in grid]
    rows = run(lambda p: _fig1b_row(cfg, p[0], p[1], eps8), points)
    if not a["raw"]:
        for curve in _by_curve(rows, ["target"]):
            _monotonize_columns(curve, "eps0_a4", ["qubits_a4", "qubits_a8", "qubits_peak", "time_steps"])
    return FIG1B_COLUMNS, rows


def _fig2(inv: Invocation, run: Callable, policy: SchedulePolicy) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    l_values = _grid(a["l_values"], ",".join(str(L) for L in FIG2_L), integer=True)
    grid_a4 = _below_cap(_grid(a["eps_a4_grid"], DEFAULT_GRIDS["fig2_a4"]), cfg.a4_input_cap)
    grid_a8 = _below_cap(_grid(a["eps_a8_grid"], DEFAULT_GRIDS["fig2_a8"]), cfg.a8_input_cap)
    points = [("a4", L, e, PINNED_EPS) for L in l_values for e in grid_a4]
    points += [("a8", L, PINNED_EPS, e) for L in l_values for e in grid_a8]
    rows = run(lambda p: {"series": p[0], **schedule_row(cfg, policy, *p[1:])}, points)
    if not a["raw"]:
        for curve in _by_curve(rows, ["series", "L"]):
            x = "eps0_a4" if curve[0]["series"] == "a4" else "eps0_a8"
            _monotonize_columns(curve, x, ["total_qubits", "total_anyons", "t_dist", "t_total"])
    return FIG2_COLUMNS, rows


def _fig3(inv: Invocation, run: Callable, policy: SchedulePolicy) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    l_values = _grid(a["l_values"], "512", integer=True)
    grid_a8 = _grid(a["eps_a8_grid"], DEFAULT_GRIDS["fig3"])
    eps4 = a["eps_a4"]
    points = [(L, eps4, e) for L in l_values for e in grid_a8]
    return SCHEDULE_COLUMNS, run(lambda p: schedule_row(cfg, policy, *p), points)


def _fig4(inv: Invocation, run: Callable) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    l_values = _grid(a["l_values"], DEFAULT_GRIDS["fig4"], integer=True)
    if any(L < 1 for L in l_values):
        raise click.BadParameter("key lengths must be >= 1")
    return FIG4_COLUMNS, run(lambda L: fib_row(L, cfg), l_values)


def _custom(inv: Invocation, run: Callable, policy: SchedulePolicy) -> tuple[list[str], list[dict]]:
    a, cfg = inv.args, inv.config
    l_values = _grid(a["l_values"], "128", integer=True)
    if any(L < 1 for L in l_values):
        raise click.BadParameter("key lengths must be >= 1")
    grid_a4 = _grid(a["eps_a4_grid"], str(a["eps_a4"]))
    grid_a8 = _grid(a["eps_a8_grid"], str(a["eps_a8"]))
    if any(not 0 <= e <= 1 for e in grid_a4 + grid_a8):
        raise click.BadParameter("error grids must lie in [0,1]")
    points = list(itertools.product(l_values, grid_a4, grid_a8))
    return SCHEDULE_COLUMNS, run(lambda p: schedule_row(cfg, policy, *p), points)


def _sweep(inv: Invocation) -> Output:
    a = inv.args
    figure = a["figure"]
    policy = SchedulePolicy(qubit_budget=a["qubit_budget"], mode=a["mode"])

    def run(fn, points):
        return ordered_map(fn, points, max_workers=inv.workers)

    if figure == "fig1a":
        columns, rows = _fig1a(inv, run)
    elif figure == "fig1b":
        columns, rows = _fig1b(inv, run)
    elif figure == "fig2":
        columns, rows = _fig2(inv, run, policy)
    elif figure == "fig3":
        columns, rows = _fig3(inv, run, policy)
    elif figure == "fig4":
        columns, rows = _fig4(inv, run)
    else:
        columns, rows = _custom(inv, run, policy)
    log.info("[sweep] %s: %d rows", figure, len(rows))
    return Output(format_csv(columns, rows))


@click.command(name="sweep")
@click.argument("figure", type=click.Choice(FIGURES))
@click.option("--target", type=click.FloatRange(min=0.0, min_open=True), default=None,
              help="Single final-error target for fig1a/fig1b (default: 1e-9, 1e-11, 1e-13).")
@click.option("--eps-grid", default=None, help="eps0 axis for fig1a/fig1b, start:stop:step or a,b,c.")
@click.option("--l-values", default=None, help="Key lengths, start:stop:step or a,b,c.")
@click.option("--eps-a4-grid", default=None, help="eps0_a4 axis for fig2/custom.")
@click.option("--eps-a8-grid", default=None, help="eps0_a8 axis for fig2/fig3/custom.")
@click.option("--eps-a4", "eps_a4", type=click.FloatRange(0.0, 1.0), default=PINNED_EPS, show_default=True,
              help="Pinned eps0_a4 for fig3/custom.")
@click.option("--eps-a8", "eps_a8", type=click.FloatRange(0.0, 1.0), default=PINNED_EPS, show_default=True,
              help="Pinned eps0_a8 for fig1b/custom.")
@click.option("--qubit-budget", type=click.IntRange(min=1), default=None)
@click.option("--mode", type=click.Choice(MODES), default="auto", show_default=True)
@click.option("--raw", is_flag=True, help="Skip the running-max pass over cost columns.")
@workers_option
@config_option
@out_option
@click.pass_context
def sweep(ctx, **params):
    """Figure data as CSV, one row per grid point."""
    execute(ctx, "sweep", params, _sweep)


def setup(cli: click.Group) -> None:
    cli.add_command(sweep)
