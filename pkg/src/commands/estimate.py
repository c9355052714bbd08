# ---------------------------------------------------------------------------
# FILE: src/commands/estimate.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import dataclasses

import click

from src.commands.common import (
    Invocation,
    Output,
    config_option,
    eps_option,
    execute,
    key_length_option,
    out_option,
)
from src.core.distillation import a4_plan, a8_plan
from src.core.errors import InfeasibleBudget
from src.core.fib_compile import total_time_fib
from src.core.gate_budget import circuit_width_fib, gate_counts
from src.core.ising_schedule import MODES, SchedulePolicy, classify_and_schedule
from src.core.physical import physical_report, resolve_preset
from src.data.persistence import to_json_text
from src.ui.report_format import summary_fib, summary_ising


@click.group(name="estimate")
def estimate():
    """Single-point resource estimates."""


@estimate.command(name="ising")
@key_length_option()
@eps_option("--eps-a4", "eps_a4", 0.01, "Initial |a4> error.")
@eps_option("--eps-a8", "eps_a8", 0.01, "Initial |a8> error.")
@click.option("--qubit-budget", type=click.IntRange(min=1), default=None,
              help="Qubits for distillation (default 0.75 * gate count).")
@click.option("--mode", type=click.Choice(MODES), default="auto", show_default=True)
@click.option("--tradeoff-factor", type=click.FloatRange(min=0.0, min_open=True), default=1.0,
              show_default=True, help="Divide the default budget by this (space/f, time*f).")
@click.option("--preset", default="nu52", show_default=True, help="Physical parameter preset.")
@click.option("--summary", is_flag=True, help="Print a readable table to stderr.")
@config_option
@out_option
@click.pass_context
def estimate_ising(ctx, **params):
    """Ising totals: regime, qubits, anyons, time steps and wall clock."""
    execute(ctx, "estimate ising", params, _ising)


def _ising(inv: Invocation) -> Output:
    a = inv.args
    cfg = inv.config
    policy = SchedulePolicy(
        qubit_budget=a["qubit_budget"], mode=a["mode"], tradeoff_factor=a["tradeoff_factor"],
    )
    report = classify_and_schedule(a["L"], a["eps_a4"], a["eps_a8"], policy, cfg)
    if not report.feasible:
        raise InfeasibleBudget(report.single_state_qubits, report.qubit_budget)

    budget = gate_counts(a["L"], cfg)
    params = resolve_preset(a["preset"], inv.presets)
    phys = physical_report(report.total_anyons, report.t_total, params)
    plans = {}
    if budget.demand_a4:
        plans["a4"] = a4_plan(a["eps_a4"], a["eps_a8"], budget.eps_gate, cfg).to_dict()
    if budget.demand_a8:
        plans["a8"] = a8_plan(a["eps_a8"], budget.eps_gate, cfg).to_dict()
    data = {
        "gate_budget": dataclasses.asdict(budget),
        "schedule": report.to_dict(),
        "plans": plans,
        "preset": a["preset"],
        "physical": phys.to_dict(),
    }
    return Output(to_json_text(data), summary_ising(data["schedule"], data["physical"]))


@estimate.command(name="fib")
@key_length_option()
@click.option("--preset", default="nu125", show_default=True, help="Physical parameter preset.")
@click.option("--summary", is_flag=True, help="Print a readable table to stderr.")
@config_option
@out_option
@click.pass_context
def estimate_fib(ctx, **params):
    """Fibonacci totals: register width, braid plan, time steps and wall clock."""
    execute(ctx, "estimate fib", params, _fib)


def _fib(inv: Invocation) -> Output:
    a = inv.args
    cfg = inv.config
    qubits, anyons = circuit_width_fib(a["L"])
    time_steps, plan = total_time_fib(a["L"], cfg)
    params = resolve_preset(a["preset"], inv.presets)
    data = {
        "L": a["L"],
        "qubits": qubits,
        "anyons": anyons,
        "n_total": gate_counts(a["L"], cfg).n_total,
        "time_steps": time_steps,
        "plan": plan.to_dict(),
        "preset": a["preset"],
        "physical": physical_report(anyons, time_steps, params).to_dict(),
    }
    return Output(to_json_text(data), summary_fib(data, data["physical"]))


def setup(cli: click.Group) -> None:
    cli.add_command(estimate)
