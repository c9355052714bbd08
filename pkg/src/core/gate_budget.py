# ---------------------------------------------------------------------------
# FILE: src/core/gate_budget.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import math
from dataclasses import dataclass

from src.core.config import DEFAULT_CONFIG, ModelConfig


@dataclass(frozen=True)
class GateBudget:
    """Gate counts, magic-state demand and per-gate error target for one key length."""

    L: int
    n_total: int
    n_not: int
    n_cnot: int
    n_ccnot: int
    eps_gate: float
    demand_a4: int
    demand_a8: int


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def gate_counts(L: int, cfg: ModelConfig = DEFAULT_CONFIG) -> GateBudget:
    """
    n_total = round(kappa * L^3). NOT and CNOT take their mix fraction of the
    total; the rounding remainder lands in CCNOT, the dominant kind.
    """
    if L < 1:
        raise ValueError(f"key length must be >= 1, got {L}")
    n_total = max(1, _round_half_up(cfg.kappa * L ** 3))
    n_not = _round_half_up(cfg.f_not * n_total)
    n_cnot = _round_half_up(cfg.f_cnot * n_total)
    n_ccnot = n_total - n_not - n_cnot
    if n_ccnot < 0:
        # only reachable with f_ccnot == 0 and both others rounding up
        n_cnot += n_ccnot
        n_ccnot = 0
    return GateBudget(
        L=L,
        n_total=n_total,
        n_not=n_not,
        n_cnot=n_cnot,
        n_ccnot=n_ccnot,
        eps_gate=min(1.0, cfg.delta_total / n_total),
        demand_a4=cfg.k_a4_per_ccnot * n_ccnot,
        demand_a8=n_cnot + cfg.k_cnot_per_ccnot * n_ccnot,
    )


def circuit_width_fib(L: int) -> tuple[int, int]:
    """(qubits, anyons) of the 2L+3 register; three Fibonacci anyons per qubit."""
    if L < 1:
        raise ValueError(f"key length must be >= 1, got {L}")
    qubits = 2 * L + 3
    return qubits, 3 * qubits


def ising_anyons(qubits: float) -> float:
    """Four Ising anyons per qubit. Infinite qubit counts stay infinite."""
    if qubits < 0:
        raise ValueError(f"qubit count must be >= 0, got {qubits}")
    if isinstance(qubits, int):
        return 4 * qubits
    return 4.0 * qubits
