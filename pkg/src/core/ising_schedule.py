# ---------------------------------------------------------------------------
# FILE: src/core/ising_schedule.py
# ---------------------------------------------------------------------------
"""
Whole-run Ising totals: gate execution time, the distillation campaign under a
qubit budget, and the A/B/C regime classification.

Batch model: every purified state needs ``qubits_expected`` raw-state slots;
a batch fills the qubit budget and runs fully parallel for the slowest
species' ladder time; batches run back to back and reuse the same qubits.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

from src.core.config import DEFAULT_CONFIG, ModelConfig
from src.core.distillation import DistillationPlan, a4_plan, a8_plan
from src.core.errors import ConfigError, InfeasibleBudget
from src.core.gate_budget import GateBudget, circuit_width_fib, gate_counts, ising_anyons

log = logging.getLogger(__name__)

AUTO = "auto"
BATCH_ALL = "batch"
INTERLEAVED = "interleave"
MODES = (AUTO, BATCH_ALL, INTERLEAVED)

REGIME_A = "A"
REGIME_B = "B"
REGIME_C = "C"


@dataclass(frozen=True)
class SchedulePolicy:
    qubit_budget: Optional[int] = None
    mode: str = AUTO
    tradeoff_factor: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.tradeoff_factor > 0:
            raise ConfigError(f"tradeoff_factor must be positive, got {self.tradeoff_factor}")
        if self.qubit_budget is not None and self.qubit_budget < 1:
            raise ConfigError(f"qubit_budget must be >= 1, got {self.qubit_budget}")

    def resolve_budget(self, budget: GateBudget, cfg: ModelConfig = DEFAULT_CONFIG) -> int:
        """Explicit budget, else ceil(budget_fraction * n_total / tradeoff_factor)."""
        if self.qubit_budget is not None:
            return self.qubit_budget
        return max(1, math.ceil(cfg.budget_fraction * budget.n_total / self.tradeoff_factor))


@dataclass(frozen=True)
class Campaign:
    t_dist: float
    peak_qubits: int
    qubit_budget: int
    batches: int
    batch_time: float
    slots: float
    single_state_qubits: int
    plan_a4: Optional[DistillationPlan]
    plan_a8: Optional[DistillationPlan]

    def t_dist_with_budget(self, qubit_budget: int) -> float:
        if self.slots <= 0:
            return 0.0
        return math.ceil(self.slots / qubit_budget) * self.batch_time


@dataclass(frozen=True)
class ScheduleReport:
    L: int
    eps0_a4: float
    eps0_a8: float
    regime: str
    mode: str
    feasible: bool
    qubit_budget: int
    t_alg: float
    t_dist: float
    t_total: float
    distill_qubits: float
    register_qubits: int
    total_qubits: float
    total_anyons: float
    measurement_fraction: float
    batches: float
    batch_time: float
    single_state_qubits: int

    def to_dict(self) -> dict:
        return asdict(self)


# ---------- gate execution ----------

def algorithm_ops(budget: GateBudget, cfg: ModelConfig = DEFAULT_CONFIG) -> tuple[int, int]:
    """(braid ops, measurement ops) spent executing the gates themselves."""
    measure = (
        budget.n_not * cfg.exec_measure_not
        + budget.n_cnot * cfg.exec_measure_cnot
        + budget.n_ccnot * cfg.exec_measure_ccnot
    )
    total = budget.n_not * cfg.exec_not + budget.n_cnot * cfg.exec_cnot + budget.n_ccnot * cfg.exec_ccnot
    return total - measure, measure


def algorithm_time(budget: GateBudget, cfg: ModelConfig = DEFAULT_CONFIG) -> float:
    braid, measure = algorithm_ops(budget, cfg)
    if cfg.measure_time_factor == 1.0:
        return braid + measure
    return braid + cfg.measure_time_factor * measure


# ---------- distillation ----------

def distillation_campaign(
    budget: GateBudget,
    eps0_a4: float,
    eps0_a8: float,
    policy: SchedulePolicy = SchedulePolicy(),
    cfg: ModelConfig = DEFAULT_CONFIG,
) -> Campaign:
    target = budget.eps_gate
    plan4 = a4_plan(eps0_a4, eps0_a8, target, cfg) if budget.demand_a4 else None
    plan8 = a8_plan(eps0_a8, target, cfg) if budget.demand_a8 else None
    qb = policy.resolve_budget(budget, cfg)

    demanded = [(d, p) for d, p in ((budget.demand_a4, plan4), (budget.demand_a8, plan8)) if p is not None]
    single = max((p.qubits_peak for _, p in demanded), default=0)
    if single > qb:
        raise InfeasibleBudget(single, qb)

    slots = math.fsum(d * p.qubits_expected for d, p in demanded)
    batch_time = max((p.time_steps for _, p in demanded), default=0.0)
    batches = math.ceil(slots / qb) if slots > 0 else 0
    campaign = Campaign(
        t_dist=batches * batch_time,
        peak_qubits=min(qb, math.ceil(slots)),
        qubit_budget=qb,
        batches=batches,
        batch_time=batch_time,
        slots=slots,
        single_state_qubits=single,
        plan_a4=plan4,
        plan_a8=plan8,
    )
    log.debug("[campaign] L=%d budget=%d batches=%d batch_time=%g t_dist=%g",
              budget.L, qb, batches, batch_time, campaign.t_dist)
    return campaign


def measurement_fraction(
    budget: GateBudget,
    plan_a4: Optional[DistillationPlan],
    plan_a8: Optional[DistillationPlan],
    cfg: ModelConfig = DEFAULT_CONFIG,
) -> float:
    """Measurement ops over all ops, distillation plus gate execution."""
    braid, measure = algorithm_ops(budget, cfg)
    braid_parts = [float(braid)]
    measure_parts = [float(measure)]
    for demand, plan in ((budget.demand_a4, plan_a4), (budget.demand_a8, plan_a8)):
        if plan is not None:
            braid_parts.append(demand * plan.ops_braid)
            measure_parts.append(demand * plan.ops_measure)
    total = math.fsum(braid_parts) + math.fsum(measure_parts)
    return math.fsum(measure_parts) / total if total > 0 else 0.0


def _minimize_interleaved_budget(campaign: Campaign, t_alg: float, slack: float) -> int:
    """Smallest budget whose distillation still finishes within (1+slack)*t_alg."""
    limit = (1.0 + slack) * t_alg

    def fits(q: int) -> bool:
        return campaign.t_dist_with_budget(q) + campaign.batch_time <= limit

    lo = max(1, campaign.single_state_qubits)
    hi = campaign.qubit_budget
    if campaign.slots <= 0:
        return 0
    if not fits(hi):
        return hi
    while lo < hi:
        mid = (lo + hi) // 2
        if fits(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def classify_and_schedule(
    L: int,
    eps0_a4: float,
    eps0_a8: float,
    policy: SchedulePolicy = SchedulePolicy(),
    cfg: ModelConfig = DEFAULT_CONFIG,
) -> ScheduleReport:
    """
    Regime A: distillation keeps up with the gates; interleave and shrink the
    factory. Regime B: distillation dominates; batch everything on the full
    budget. Regime C: one state alone fills or overflows the budget.

    AboveThreshold from either protocol propagates to the caller.
    """
    budget = gate_counts(L, cfg)
    register, _ = circuit_width_fib(L)
    t_alg = algorithm_time(budget, cfg)
    qb = policy.resolve_budget(budget, cfg)

    try:
        campaign = distillation_campaign(budget, eps0_a4, eps0_a8, policy, cfg)
        if campaign.single_state_qubits >= qb:
            # regime C starts at a budget exactly one state wide
            raise InfeasibleBudget(campaign.single_state_qubits, qb)
    except InfeasibleBudget as e:
        log.info("[schedule] L=%d eps0=%g/%g regime C: %s", L, eps0_a4, eps0_a8, e)
        plan4 = a4_plan(eps0_a4, eps0_a8, budget.eps_gate, cfg) if budget.demand_a4 else None
        plan8 = a8_plan(eps0_a8, budget.eps_gate, cfg) if budget.demand_a8 else None
        return ScheduleReport(
            L=L,
            eps0_a4=eps0_a4,
            eps0_a8=eps0_a8,
            regime=REGIME_C,
            mode=policy.mode,
            feasible=False,
            qubit_budget=qb,
            t_alg=t_alg,
            t_dist=math.inf,
            t_total=math.inf,
            distill_qubits=math.inf,
            register_qubits=register,
            total_qubits=math.inf,
            total_anyons=math.inf,
            measurement_fraction=measurement_fraction(budget, plan4, plan8, cfg),
            batches=math.inf,
            batch_time=max((p.time_steps for p in (plan4, plan8) if p is not None), default=0.0),
            single_state_qubits=e.single_state_qubits,
        )

    regime = REGIME_A if campaign.t_dist <= t_alg else REGIME_B
    mode = policy.mode
    if mode == AUTO:
        mode = INTERLEAVED if regime == REGIME_A else BATCH_ALL

    if mode == INTERLEAVED:
        distill_qubits = _minimize_interleaved_budget(campaign, t_alg, cfg.interleave_slack)
        t_dist = campaign.t_dist_with_budget(distill_qubits) if distill_qubits else 0.0
        batches = math.ceil(campaign.slots / distill_qubits) if distill_qubits else 0
        t_total = max(t_alg, t_dist) + campaign.batch_time
    else:
        distill_qubits = campaign.peak_qubits
        t_dist = campaign.t_dist
        batches = campaign.batches
        t_total = t_dist + t_alg

    total_qubits = distill_qubits + register
    report = ScheduleReport(
        L=L,
        eps0_a4=eps0_a4,
        eps0_a8=eps0_a8,
        regime=regime,
        mode=mode,
        feasible=True,
        qubit_budget=qb,
        t_alg=t_alg,
        t_dist=t_dist,
        t_total=t_total,
        distill_qubits=distill_qubits,
        register_qubits=register,
        total_qubits=total_qubits,
        total_anyons=ising_anyons(total_qubits),
        measurement_fraction=measurement_fraction(budget, campaign.plan_a4, campaign.plan_a8, cfg),
        batches=batches,
        batch_time=campaign.batch_time,
        single_state_qubits=campaign.single_state_qubits,
    )
    log.info("[schedule] L=%d eps0=%g/%g regime %s mode %s t_total=%.4g qubits=%.4g",
             L, eps0_a4, eps0_a8, regime, mode, t_total, total_qubits)
    return report
