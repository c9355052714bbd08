# ---------------------------------------------------------------------------
# FILE: src/core/distillation.py
# ---------------------------------------------------------------------------
"""
Magic-state distillation ladders for the |a8> and |a4> protocols.

A protocol is a parameterized recursion: each round eats ``n_raw`` inputs at
error eps and, with probability ``success_prob(eps)``, emits one state at
``map_coeff * eps ** map_exponent``. A failed round discards its inputs.
|a4> rounds additionally eat ``ancilla_a8_per_round`` |a8> states, each
distilled to at least the error that round is producing.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from src.core.config import DEFAULT_CONFIG, ModelConfig
from src.core.errors import AboveThreshold, ConfigError

log = logging.getLogger(__name__)

A8 = "A8"
A4 = "A4"
MAX_ROUNDS = 64


@dataclass(frozen=True)
class ProtocolSpec:
    name: str
    n_raw: int
    map_coeff: float
    map_exponent: float
    input_cap: float
    ancilla_a8_per_round: int
    round_time: int
    round_ops_braid: int
    round_ops_measure: int
    qubits_per_raw: int
    success_model: str = "linear"
    measure_time_factor: float = 1.0

    @property
    def effective_round_time(self) -> float:
        """Round time with measurement steps stretched by ``measure_time_factor``."""
        ops = self.round_ops_braid + self.round_ops_measure
        if ops == 0 or self.measure_time_factor == 1.0:
            return float(self.round_time)
        stretched = self.round_ops_braid + self.measure_time_factor * self.round_ops_measure
        return self.round_time * stretched / ops


def protocol(name: str, cfg: ModelConfig = DEFAULT_CONFIG) -> ProtocolSpec:
    if name == A8:
        return ProtocolSpec(
            name=A8,
            n_raw=cfg.a8_n_raw,
            map_coeff=cfg.a8_map_coeff,
            map_exponent=cfg.a8_map_exponent,
            input_cap=cfg.a8_input_cap,
            ancilla_a8_per_round=0,
            round_time=cfg.a8_round_time,
            round_ops_braid=cfg.a8_round_ops_braid,
            round_ops_measure=cfg.a8_round_ops_measure,
            qubits_per_raw=cfg.a8_qubits_per_raw,
            success_model=cfg.success_model,
            measure_time_factor=cfg.measure_time_factor,
        )
    if name == A4:
        return ProtocolSpec(
            name=A4,
            n_raw=cfg.a4_n_raw,
            map_coeff=cfg.a4_map_coeff,
            map_exponent=cfg.a4_map_exponent,
            input_cap=cfg.a4_input_cap,
            ancilla_a8_per_round=cfg.ancilla_a8_per_round,
            round_time=cfg.a4_round_time,
            round_ops_braid=cfg.a4_round_ops_braid,
            round_ops_measure=cfg.a4_round_ops_measure,
            qubits_per_raw=cfg.a4_qubits_per_raw,
            success_model=cfg.success_model,
            measure_time_factor=cfg.measure_time_factor,
        )
    raise ConfigError(f"unknown protocol {name!r} (expected {A8} or {A4})")


@dataclass(frozen=True)
class AncillaBatch:
    """|a8> states consumed by one |a4> ladder level."""

    level: int
    target: float
    expected_count: float
    plan: "DistillationPlan"


@dataclass(frozen=True)
class DistillationPlan:
    protocol: str
    eps0: float
    target: float
    rounds: int
    level_errors: tuple[float, ...]
    attempts: tuple[float, ...]
    expected_raw: float
    own_qubits: float
    ancilla_qubits: float
    time_steps: float
    ops_braid: float
    ops_measure: float
    expected_ancilla_a8: float = 0.0
    ancillas: tuple[AncillaBatch, ...] = field(default=(), repr=False)

    @property
    def qubits_expected(self) -> float:
        return self.own_qubits + self.ancilla_qubits

    @property
    def qubits_peak(self) -> int:
        return math.ceil(self.qubits_expected - 1e-9)

    @property
    def ancilla_raw(self) -> float:
        return math.fsum(b.expected_count * b.plan.expected_raw for b in self.ancillas)

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "eps0": self.eps0,
            "target": self.target,
            "rounds": self.rounds,
            "level_errors": list(self.level_errors),
            "expected_raw": self.expected_raw,
            "expected_ancilla_a8": self.expected_ancilla_a8,
            "ancilla_raw_a8": self.ancilla_raw,
            "qubits_own": self.own_qubits,
            "qubits_ancilla": self.ancilla_qubits,
            "qubits_peak": self.qubits_peak,
            "time_steps": self.time_steps,
            "ops_braid": self.ops_braid,
            "ops_measure": self.ops_measure,
        }


# ---------- error map ----------

def _check_cap(spec: ProtocolSpec, eps: float) -> None:
    if eps < 0 or eps > 1:
        raise ValueError(f"error probability must lie in [0,1], got {eps}")
    if eps >= spec.input_cap:
        raise AboveThreshold(spec.name, eps, spec.input_cap)


def output_error(spec: ProtocolSpec, eps: float) -> float:
    _check_cap(spec, eps)
    if eps == 0:
        return 0.0
    return min(1.0, spec.map_coeff * eps ** spec.map_exponent)


def level_errors(spec: ProtocolSpec, eps0: float, target: float) -> list[float]:
    """Iterated errors eps0, eps1, ... stopping at the first one <= target."""
    _check_cap(spec, eps0)
    if not target > 0:
        raise ValueError(f"target error must be positive, got {target}")
    errors = [eps0]
    while errors[-1] > target:
        nxt = output_error(spec, errors[-1])
        if nxt >= errors[-1] or len(errors) > MAX_ROUNDS:
            raise ConfigError(
                f"{spec.name} error map does not contract at eps={errors[-1]:g}"
            )
        errors.append(nxt)
    return errors


def rounds_needed(spec: ProtocolSpec, eps0: float, target: float) -> int:
    return len(level_errors(spec, eps0, target)) - 1


def success_prob(spec: ProtocolSpec, eps: float) -> float:
    _check_cap(spec, eps)
    if spec.success_model == "unity":
        return 1.0
    p = 1.0 - eps / spec.input_cap
    if spec.success_model == "quadratic":
        return p * p
    return p


def attempts_per_level(spec: ProtocolSpec, errors: Sequence[float]) -> list[float]:
    """
    Expected round attempts at each level per purified output.

    The last level runs until one success; every lower level must feed
    ``n_raw`` successes into each attempt above it.
    """
    rounds = len(errors) - 1
    attempts = [0.0] * rounds
    need = 1.0
    for i in range(rounds - 1, -1, -1):
        attempts[i] = need / success_prob(spec, errors[i])
        need = spec.n_raw * attempts[i]
    return attempts


def _ladder(spec: ProtocolSpec, eps0: float, target: float) -> DistillationPlan:
    errors = level_errors(spec, eps0, target)
    attempts = attempts_per_level(spec, errors)
    rounds = len(attempts)
    expected_raw = spec.n_raw * attempts[0] if rounds else 1.0
    total_attempts = math.fsum(attempts)
    return DistillationPlan(
        protocol=spec.name,
        eps0=eps0,
        target=target,
        rounds=rounds,
        level_errors=tuple(errors),
        attempts=tuple(attempts),
        expected_raw=expected_raw,
        own_qubits=spec.qubits_per_raw * expected_raw,
        ancilla_qubits=0.0,
        time_steps=rounds * spec.effective_round_time,
        ops_braid=total_attempts * spec.round_ops_braid,
        ops_measure=total_attempts * spec.round_ops_measure,
    )


def a8_plan(eps0: float, target: float, cfg: ModelConfig = DEFAULT_CONFIG) -> DistillationPlan:
    """Cost of one |a8> state at error <= target, all rounds fully parallel."""
    return _ladder(protocol(A8, cfg), eps0, target)


def a4_plan(
    eps0_a4: float,
    eps0_a8: float,
    target: float,
    cfg: ModelConfig = DEFAULT_CONFIG,
) -> DistillationPlan:
    """
    Cost of one |a4> state at error <= target, including the |a8> ancillas
    each round consumes. Ancillas for the round producing level i+1 are
    distilled to at least that level's error before the round starts, so
    each level's time is its |a8> sub-ladder followed by one |a4> round.
    """
    spec4 = protocol(A4, cfg)
    spec8 = protocol(A8, cfg)
    _check_cap(spec8, eps0_a8)
    base = _ladder(spec4, eps0_a4, target)

    batches: list[AncillaBatch] = []
    time_steps = 0.0
    for i, att in enumerate(base.attempts):
        level_target = base.level_errors[i + 1]
        if spec4.ancilla_a8_per_round:
            sub = a8_plan(eps0_a8, level_target, cfg)
            assert sub.level_errors[-1] <= level_target
            batches.append(AncillaBatch(i, level_target, spec4.ancilla_a8_per_round * att, sub))
            time_steps += sub.time_steps
        time_steps += spec4.effective_round_time

    ancilla_qubits = math.fsum(b.expected_count * b.plan.own_qubits for b in batches)
    plan = DistillationPlan(
        protocol=A4,
        eps0=eps0_a4,
        target=target,
        rounds=base.rounds,
        level_errors=base.level_errors,
        attempts=base.attempts,
        expected_raw=base.expected_raw,
        own_qubits=base.own_qubits,
        ancilla_qubits=ancilla_qubits,
        time_steps=time_steps,
        ops_braid=base.ops_braid + math.fsum(b.expected_count * b.plan.ops_braid for b in batches),
        ops_measure=base.ops_measure + math.fsum(b.expected_count * b.plan.ops_measure for b in batches),
        expected_ancilla_a8=math.fsum(b.expected_count for b in batches),
        ancillas=tuple(batches),
    )
    log.debug("[a4] eps0=%g/%g target=%g rounds=%d raw=%.4g a8=%.4g",
              eps0_a4, eps0_a8, target, plan.rounds, plan.expected_raw, plan.ancilla_raw)
    return plan


def monotonize(curve: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Running maximum of cost over increasing eps0."""
    out: list[tuple[float, float]] = []
    best = -math.inf
    for eps0, cost in curve:
        best = max(best, cost)
        out.append((eps0, best))
    return out
