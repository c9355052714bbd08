# ---------------------------------------------------------------------------
# FILE: src/commands/montecarlo.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import math

import click

from src.commands.common import (
    Invocation,
    Output,
    config_option,
    eps_option,
    execute,
    out_option,
    workers_option,
)
from src.core.distillation import A4, A8, a4_plan, a8_plan
from src.core.ising_schedule import SchedulePolicy, distillation_campaign
from src.core.mc_oracle import SimConfig, demand_budget, simulate_campaign, simulate_state_production
from src.data.persistence import to_json_text
from src.ui.report_format import format_csv
from src.utils.atomic_write import write_text_atomic

TRIAL_COLUMNS = ["index", "raw_states", "time_steps", "peak_qubits", "batches"]


def _z(simulated: float, analytic: float, se: float) -> float | None:
    if se > 0:
        return (simulated - analytic) / se
    return 0.0 if math.isclose(simulated, analytic, rel_tol=1e-12, abs_tol=1e-12) else None


def _montecarlo(inv: Invocation) -> Output:
    a, cfg = inv.args, inv.config
    species = A4 if a["species"] == "a4" else A8
    eps0 = a["eps_a4"] if species == A4 else a["eps_a8"]
    sim = SimConfig(
        seed=a["seed"],
        trials=a["trials"],
        qubit_budget=a["qubit_budget"],
        workers=inv.workers,
        keep_trials=bool(inv.extras.get("dump_trials")),
    )

    if a["demand"] is None:
        result = simulate_state_production(species, eps0, a["target"], sim, cfg, eps0_a8=a["eps_a8"])
        plan = (a4_plan(eps0, a["eps_a8"], a["target"], cfg) if species == A4
                else a8_plan(eps0, a["target"], cfg))
        analytic = {
            "expected_raw": plan.expected_raw,
            "time_steps": plan.time_steps if sim.qubit_budget is None else None,
            "qubits_expected": plan.qubits_expected,
        }
        z = {
            "raw_states": _z(result.mean_raw_states, plan.expected_raw, result.se_raw_states),
            "peak_qubits": (_z(result.mean_peak_qubits, plan.qubits_expected, result.se_peak_qubits)
                            if sim.qubit_budget is None else None),
        }
        mode = "state"
    else:
        if a["qubit_budget"] is None:
            raise click.UsageError("--demand needs --qubit-budget")
        budget = demand_budget(species, a["demand"], a["target"])
        policy = SchedulePolicy(qubit_budget=a["qubit_budget"])
        result = simulate_campaign(budget, a["eps_a4"], a["eps_a8"], policy, sim, cfg)
        campaign = distillation_campaign(budget, a["eps_a4"], a["eps_a8"], policy, cfg)
        analytic = {
            "t_dist": campaign.t_dist,
            "peak_qubits": campaign.peak_qubits,
            "batches": campaign.batches,
            "slots": campaign.slots,
        }
        z = {"t_dist": _z(result.mean_time_steps, campaign.t_dist, result.se_time_steps)}
        mode = "campaign"

    if inv.extras.get("dump_trials"):
        write_text_atomic(inv.extras["dump_trials"], format_csv(TRIAL_COLUMNS, [vars(t) for t in result.per_trial]))

    data = {
        "mode": mode,
        "species": a["species"],
        "eps0_a4": a["eps_a4"],
        "eps0_a8": a["eps_a8"],
        "target": a["target"],
        "demand": a["demand"],
        "qubit_budget": a["qubit_budget"],
        "simulated": result.to_dict(),
        "analytic": analytic,
        "z_scores": z,
    }
    return Output(to_json_text(data))


@click.command(name="montecarlo")
@click.option("--species", type=click.Choice(["a8", "a4"]), default="a8", show_default=True)
@eps_option("--eps-a4", "eps_a4", 0.01, "Initial |a4> error.")
@eps_option("--eps-a8", "eps_a8", 0.01, "Initial |a8> error.")
@click.option("--target", type=click.FloatRange(min=0.0, min_open=True), default=1e-9, show_default=True)
@click.option("--demand", type=click.IntRange(min=0), default=None,
              help="Simulate a campaign for this many purified states instead of one.")
@click.option("--qubit-budget", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Default: config seed.")
@click.option("--trials", type=click.IntRange(min=1), default=None, help="Default: config trials.")
@click.option("--dump-trials", type=click.Path(dir_okay=False), default=None,
              help="Also write one CSV row per trial here.")
@workers_option
@config_option
@out_option
@click.pass_context
def montecarlo(ctx, **params):
    """Stochastic factory simulation checked against the analytic plans."""
    execute(ctx, "montecarlo", params, _montecarlo)


def setup(cli: click.Group) -> None:
    cli.add_command(montecarlo)
