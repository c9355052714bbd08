# ---------------------------------------------------------------------------
# FILE: src/core/physical.py
# ---------------------------------------------------------------------------
from __future__ import annotations

import dataclasses
import math
from dataclasses import asdict, dataclass
from typing import Any, Mapping

from scipy import constants as sc

from src.core.errors import ConfigError

HBAR = sc.hbar
K_B = sc.k
E_CHARGE = sc.e


@dataclass(frozen=True)
class PhysicalParams:
    """Defaults are the nu=5/2 set: 1 K gap, 5 T field, 100-length hops."""

    gap_kelvin: float = 1.0
    b_tesla: float = 5.0
    separation_factor: float = 100.0
    eta: float = 0.0229
    packing: float = 2.5
    charge_fraction: float = 0.25
    length_factor: float = 2.0

    def __post_init__(self) -> None:
        for name in ("b_tesla", "separation_factor", "packing", "length_factor"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("gap_kelvin", "eta"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not 0 < self.charge_fraction <= 1:
            raise ConfigError(f"charge_fraction must lie in (0,1], got {self.charge_fraction}")

    @property
    def gap_joules(self) -> float:
        return K_B * self.gap_kelvin


PRESETS: dict[str, PhysicalParams] = {
    "nu52": PhysicalParams(),
    # 12/5 gap assumed one tenth of the 5/2 gap
    "nu125": PhysicalParams(gap_kelvin=0.1),
}


def resolve_preset(name: str, overrides: Mapping[str, Mapping[str, Any]] | None = None) -> PhysicalParams:
    """Built-in preset by name, with any fields the config file's ``presets`` section sets."""
    overrides = overrides or {}
    if name not in PRESETS and name not in overrides:
        raise ConfigError(f"unknown physical preset {name!r}; known: {sorted(set(PRESETS) | set(overrides))}")
    base = PRESETS.get(name, PhysicalParams())
    fields = {f.name for f in dataclasses.fields(PhysicalParams)}
    changes = dict(overrides.get(name, {}))
    unknown = sorted(set(changes) - fields)
    if unknown:
        raise ConfigError(f"unknown fields in preset {name!r}: {', '.join(unknown)}")
    try:
        return dataclasses.replace(base, **{k: float(v) for k, v in changes.items()})
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad value in preset {name!r}: {e}") from e


def magnetic_length(b_tesla: float) -> float:
    if not b_tesla > 0:
        raise ValueError(f"magnetic field must be positive, got {b_tesla}")
    return math.sqrt(HBAR / (E_CHARGE * b_tesla))


def drift_velocity(p: PhysicalParams) -> float:
    return p.gap_joules * magnetic_length(p.b_tesla) / HBAR


def max_field(p: PhysicalParams) -> float:
    return p.gap_joules / (p.charge_fraction * E_CHARGE * p.length_factor * magnetic_length(p.b_tesla))


def step_rate(p: PhysicalParams) -> float:
    """Drift velocity over one hop of s magnetic lengths, scaled by eta."""
    return p.eta * (p.gap_joules / HBAR) / p.separation_factor


def sample_area(n_qp: float, p: PhysicalParams) -> float:
    if n_qp < 0:
        raise ValueError(f"quasiparticle count must be >= 0, got {n_qp}")
    if n_qp == 0:
        return 0.0
    hop = p.separation_factor * magnetic_length(p.b_tesla)
    return p.packing * n_qp * hop * hop


def wall_clock(time_steps: float, p: PhysicalParams) -> float:
    if time_steps < 0:
        raise ValueError(f"time steps must be >= 0, got {time_steps}")
    if time_steps == 0:
        return 0.0
    rate = step_rate(p)
    return time_steps / rate if rate > 0 else math.inf


@dataclass(frozen=True)
class PhysicalReport:
    magnetic_length_m: float
    max_field_v_per_m: float
    drift_velocity_m_per_s: float
    step_rate_hz: float
    sample_area_m2: float
    wall_clock_s: float

    def to_dict(self) -> dict:
        return asdict(self)


def physical_report(n_qp: float, time_steps: float, p: PhysicalParams) -> PhysicalReport:
    return PhysicalReport(
        magnetic_length_m=magnetic_length(p.b_tesla),
        max_field_v_per_m=max_field(p),
        drift_velocity_m_per_s=drift_velocity(p),
        step_rate_hz=step_rate(p),
        sample_area_m2=sample_area(n_qp, p),
        wall_clock_s=wall_clock(time_steps, p),
    )
