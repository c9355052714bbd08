# ---------------------------------------------------------------------------
# FILE: src/core/fib_compile.py
# ---------------------------------------------------------------------------
"""
Braid-length cost model for Fibonacci anyons.

Brute-force braids reach error amp * exp(-alpha * length) up to ``l_max``
steps. Tighter targets take Solovay-Kitaev iterations on top of the longest
brute-force braid: error goes to c * eps ** 1.5 and length multiplies by
``sk_len_factor`` per iteration.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from src.core.config import DEFAULT_CONFIG, ModelConfig
from src.core.errors import NonConvergent
from src.core.gate_budget import gate_counts

MAX_SK_ITERATIONS = 32


@dataclass(frozen=True)
class BraidModel:
    alpha: float
    amp: float
    l_max: int
    sk_c: float
    sk_len_factor: int

    @classmethod
    def from_config(cls, cfg: ModelConfig = DEFAULT_CONFIG) -> "BraidModel":
        return cls(
            alpha=cfg.braid_alpha,
            amp=cfg.braid_amp,
            l_max=cfg.braid_l_max,
            sk_c=cfg.sk_c,
            sk_len_factor=cfg.sk_len_factor,
        )

    def error_at(self, length: int) -> float:
        return self.amp * math.exp(-self.alpha * length)


class NeedsSK:
    """Marker: no brute-force braid up to l_max reaches the target."""

    def __repr__(self) -> str:
        return "NEEDS_SK"


NEEDS_SK = NeedsSK()


@dataclass(frozen=True)
class BraidPlan:
    eps_required: float
    base_length: int
    n_sk: int
    total_length: int
    eps_achieved: float

    def to_dict(self) -> dict:
        return asdict(self)


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1:
        raise ValueError(f"braid error target must lie in (0,1), got {eps}")


def base_braid(eps: float, model: BraidModel) -> tuple[int, float] | NeedsSK:
    _check_eps(eps)
    x = math.log(model.amp / eps) / model.alpha
    # absorb float noise so eps == error_at(n) maps to n, not n + 1
    length = max(0, math.ceil(x - 1e-9 * max(1.0, abs(x))))
    if length > model.l_max:
        return NEEDS_SK
    return length, min(eps, model.error_at(length))


def sk_plan(eps: float, model: BraidModel) -> BraidPlan:
    base = base_braid(eps, model)
    if not isinstance(base, NeedsSK):
        length, achieved = base
        return BraidPlan(eps, length, 0, length, achieved)

    err = model.error_at(model.l_max)
    if model.sk_c * math.sqrt(err) >= 1:
        raise NonConvergent(
            f"SK map does not contract: c*sqrt(eps0) = {model.sk_c * math.sqrt(err):g} >= 1"
        )
    n_sk = 0
    while err > eps:
        err = model.sk_c * err ** 1.5
        n_sk += 1
        if n_sk > MAX_SK_ITERATIONS:
            raise NonConvergent(f"SK target {eps:g} not reached in {MAX_SK_ITERATIONS} iterations")
    return BraidPlan(
        eps_required=eps,
        base_length=model.l_max,
        n_sk=n_sk,
        total_length=model.l_max * model.sk_len_factor ** n_sk,
        eps_achieved=err,
    )


def total_time_fib(L: int, cfg: ModelConfig = DEFAULT_CONFIG) -> tuple[float, BraidPlan]:
    """Whole-run time steps: every gate compiled to the per-gate error budget."""
    budget = gate_counts(L, cfg)
    plan = sk_plan(budget.eps_gate, BraidModel.from_config(cfg))
    weighted = (
        budget.n_not * cfg.braid_mult_not
        + budget.n_cnot * cfg.braid_mult_cnot
        + budget.n_ccnot * cfg.braid_mult_ccnot
    )
    return weighted * plan.total_length, plan


def fib_row(L: int, cfg: ModelConfig = DEFAULT_CONFIG) -> dict:
    """One row of the L sweep."""
    time_steps, plan = total_time_fib(L, cfg)
    return {
        "L": L,
        "n_total": gate_counts(L, cfg).n_total,
        "eps_required": plan.eps_required,
        "base_length": plan.base_length,
        "n_sk": plan.n_sk,
        "total_length": plan.total_length,
        "time_steps": time_steps,
    }
