# ---------------------------------------------------------------------------
# FILE: src/core/errors.py
# ---------------------------------------------------------------------------
from __future__ import annotations


class TopoFactorError(Exception):
    """Base class for model errors surfaced to the CLI."""


class AboveThreshold(TopoFactorError):
    """Input error is at or above a protocol's admissibility cap."""

    def __init__(self, protocol: str, eps: float, cap: float):
        self.protocol = protocol
        self.eps = eps
        self.cap = cap
        super().__init__(
            f"{protocol} input error {eps:g} is not below the distillation cap {cap:g}; "
            "the state cannot be distilled (regime C)"
        )


class InfeasibleBudget(TopoFactorError):
    """A single purified state needs more qubits than the whole budget."""

    def __init__(self, single_state_qubits: int, qubit_budget: int):
        self.single_state_qubits = single_state_qubits
        self.qubit_budget = qubit_budget
        super().__init__(
            f"one purified state needs {single_state_qubits} qubits but the budget is "
            f"{qubit_budget} (regime C: qubits and distillation time diverge)"
        )


class NonConvergent(TopoFactorError):
    """Solovay-Kitaev error map does not contract for the configured constants."""


class ConfigError(TopoFactorError, ValueError):
    """Invalid or unknown configuration constant."""
