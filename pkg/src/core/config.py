# ---------------------------------------------------------------------------
# FILE: src/core/config.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import dataclasses
import logging
import math
import os
from dataclasses import dataclass
from typing import Any, Mapping

from src.core.errors import ConfigError

log = logging.getLogger(__name__)


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        log.warning("[config] %s=%r is not an integer; using %d", name, raw, default)
        return default
    if value < minimum:
        log.warning("[config] %s=%d is below %d; using %d", name, value, minimum, default)
        return default
    return value


# ---- Env-driven knobs -------------------------------------------------------
CONFIG_ENV = "TOPOFACTOR_CONFIG"
LEDGER_ENV = "TOPOFACTOR_LEDGER"
LOG_LEVEL = os.getenv("TOPOFACTOR_LOG_LEVEL", "WARNING").upper()
DEFAULT_WORKERS = _env_int("TOPOFACTOR_WORKERS", 4)

SUCCESS_MODELS = ("linear", "quadratic", "unity")


@dataclass(frozen=True)
class ModelConfig:
    """
    Every calibration constant of the model, flat.

    Defaults reproduce the L=128 anchors (about 1e9 gates, 1e11 time steps,
    3e9 anyons) and the L=512 regime boundaries; see DESIGN.md for the ledger.
    """

    # gate budget
    kappa: float = 477.0
    f_not: float = 0.1
    f_cnot: float = 0.4
    f_ccnot: float = 0.5
    delta_total: float = 1.0
    k_a4_per_ccnot: int = 7
    k_cnot_per_ccnot: int = 6

    # |a8> distillation
    a8_n_raw: int = 4
    a8_map_coeff: float = 1.0 / 0.38
    a8_map_exponent: float = 2.0
    a8_input_cap: float = 0.38
    a8_round_time: int = 100
    a8_round_ops_braid: int = 93
    a8_round_ops_measure: int = 7
    a8_qubits_per_raw: int = 2

    # |a4> distillation
    a4_n_raw: int = 15
    a4_map_coeff: float = 35.0
    a4_map_exponent: float = 3.0
    a4_input_cap: float = 0.14
    a4_round_time: int = 3_000_000
    a4_round_ops_braid: int = 2_790_000
    a4_round_ops_measure: int = 210_000
    a4_qubits_per_raw: int = 1
    ancilla_a8_per_round: int = 36

    success_model: str = "linear"

    # scheduling
    budget_fraction: float = 0.75
    interleave_slack: float = 0.1
    measure_time_factor: float = 1.0
    # half of 2/30/250: keeps the L=512 A->B boundary near 0.07 (DESIGN.md)
    exec_not: int = 1
    exec_cnot: int = 15
    exec_ccnot: int = 125
    exec_measure_not: int = 0
    exec_measure_cnot: int = 1
    exec_measure_ccnot: int = 8

    # Fibonacci braids
    braid_alpha: float = math.log(1e10) / 80.0
    braid_amp: float = 1.0
    braid_l_max: int = 80
    sk_c: float = 1.0
    sk_len_factor: int = 5
    braid_mult_not: float = 1.0
    braid_mult_cnot: float = 1.0
    braid_mult_ccnot: float = 1.0

    # Monte Carlo
    seed: int = 20240607
    trials: int = 1000

    def __post_init__(self) -> None:
        fractions = (self.f_not, self.f_cnot, self.f_ccnot)
        if any(f < 0 or f > 1 for f in fractions):
            raise ConfigError(f"gate mix fractions must lie in [0,1], got {fractions}")
        if not math.isclose(sum(fractions), 1.0, abs_tol=1e-9):
            raise ConfigError(f"gate mix fractions must sum to 1, got {sum(fractions)}")
        positive = {
            "kappa": self.kappa,
            "delta_total": self.delta_total,
            "a8_n_raw": self.a8_n_raw,
            "a4_n_raw": self.a4_n_raw,
            "a8_map_coeff": self.a8_map_coeff,
            "a4_map_coeff": self.a4_map_coeff,
            "a8_input_cap": self.a8_input_cap,
            "a4_input_cap": self.a4_input_cap,
            "a8_qubits_per_raw": self.a8_qubits_per_raw,
            "a4_qubits_per_raw": self.a4_qubits_per_raw,
            "budget_fraction": self.budget_fraction,
            "measure_time_factor": self.measure_time_factor,
            "braid_alpha": self.braid_alpha,
            "braid_amp": self.braid_amp,
            "braid_l_max": self.braid_l_max,
            "sk_c": self.sk_c,
            "trials": self.trials,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        non_negative = {
            "k_a4_per_ccnot": self.k_a4_per_ccnot,
            "k_cnot_per_ccnot": self.k_cnot_per_ccnot,
            "ancilla_a8_per_round": self.ancilla_a8_per_round,
            "a8_round_time": self.a8_round_time,
            "a4_round_time": self.a4_round_time,
            "a8_round_ops_braid": self.a8_round_ops_braid,
            "a8_round_ops_measure": self.a8_round_ops_measure,
            "a4_round_ops_braid": self.a4_round_ops_braid,
            "a4_round_ops_measure": self.a4_round_ops_measure,
            "interleave_slack": self.interleave_slack,
            "exec_not": self.exec_not,
            "exec_cnot": self.exec_cnot,
            "exec_ccnot": self.exec_ccnot,
            "exec_measure_not": self.exec_measure_not,
            "exec_measure_cnot": self.exec_measure_cnot,
            "exec_measure_ccnot": self.exec_measure_ccnot,
            "braid_mult_not": self.braid_mult_not,
            "braid_mult_cnot": self.braid_mult_cnot,
            "braid_mult_ccnot": self.braid_mult_ccnot,
            "seed": self.seed,
        }
        for name, value in non_negative.items():
            if value < 0:
                raise ConfigError(f"{name} must be non-negative, got {value}")
        for kind in ("not", "cnot", "ccnot"):
            if getattr(self, f"exec_measure_{kind}") > getattr(self, f"exec_{kind}"):
                raise ConfigError(f"exec_measure_{kind} cannot exceed exec_{kind}")
        if not 0 < self.a8_input_cap <= 1 or not 0 < self.a4_input_cap <= 1:
            raise ConfigError("input caps must lie in (0,1]")
        if self.sk_len_factor <= 1:
            raise ConfigError(f"sk_len_factor must exceed 1, got {self.sk_len_factor}")
        if self.success_model not in SUCCESS_MODELS:
            raise ConfigError(
                f"success_model must be one of {SUCCESS_MODELS}, got {self.success_model!r}"
            )

    # ---------- (de)serialization ----------

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    @classmethod
    def from_mapping(cls, constants: Mapping[str, Any] | None) -> "ModelConfig":
        constants = dict(constants or {})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(constants) - set(known))
        if unknown:
            raise ConfigError(f"unknown config constants: {', '.join(unknown)}")
        coerced: dict[str, Any] = {}
        defaults = cls()
        for name, value in constants.items():
            default = getattr(defaults, name)
            if isinstance(default, int) and isinstance(value, float) and not value.is_integer():
                raise ConfigError(f"{name} must be an integer, got {value}")
            try:
                if isinstance(default, str):
                    coerced[name] = str(value)
                elif isinstance(default, int):
                    coerced[name] = int(value)
                else:
                    coerced[name] = float(value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"bad value for {name}: {value!r} ({e})") from e
        return cls(**coerced)

    def replace(self, **changes: Any) -> "ModelConfig":
        return dataclasses.replace(self, **changes)


DEFAULT_CONFIG = ModelConfig()
