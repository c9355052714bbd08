import math

import pytest

from src.core.config import ModelConfig
from src.core.errors import ConfigError
from src.core.gate_budget import circuit_width_fib, gate_counts, ising_anyons


def test_counts_at_128():
    b = gate_counts(128)
    assert b.n_total == 1_000_341_504
    assert b.n_not == 100_034_150
    assert b.n_cnot == 400_136_602
    assert b.n_ccnot == 500_170_752
    assert b.eps_gate == pytest.approx(1 / 1_000_341_504)


def test_magic_state_demand_at_128():
    b = gate_counts(128)
    assert b.demand_a4 == 7 * b.n_ccnot == 3_501_195_264
    assert b.demand_a8 == b.n_cnot + 6 * b.n_ccnot == 3_401_161_114


@pytest.mark.parametrize("L", [1, 2, 3, 17, 64, 100, 333, 1024, 4096])
def test_kinds_add_up_to_total(L):
    b = gate_counts(L)
    assert b.n_not + b.n_cnot + b.n_ccnot == b.n_total
    assert min(b.n_not, b.n_cnot, b.n_ccnot) >= 0


def test_total_grows_as_cube():
    small, large = gate_counts(256), gate_counts(512)
    assert large.n_total / small.n_total == pytest.approx(8.0, rel=1e-9)


def test_custom_mix():
    cfg = ModelConfig(kappa=1.0, f_not=0.2, f_cnot=0.3, f_ccnot=0.5)
    b = gate_counts(10, cfg)
    assert (b.n_total, b.n_not, b.n_cnot, b.n_ccnot) == (1000, 200, 300, 500)


def test_eps_gate_capped_at_one():
    cfg = ModelConfig(kappa=0.001, delta_total=1.0)
    assert gate_counts(1, cfg).eps_gate == 1.0


def test_bad_key_length():
    with pytest.raises(ValueError):
        gate_counts(0)
    with pytest.raises(ValueError):
        circuit_width_fib(-3)


def test_mix_must_sum_to_one():
    with pytest.raises(ConfigError):
        ModelConfig(f_not=0.5, f_cnot=0.5, f_ccnot=0.5)


def test_fib_register():
    assert circuit_width_fib(128) == (259, 777)
    assert circuit_width_fib(1) == (5, 15)


def test_ising_anyons():
    assert ising_anyons(259) == 1036
    assert ising_anyons(2.5) == 10.0
    assert math.isinf(ising_anyons(math.inf))
    with pytest.raises(ValueError):
        ising_anyons(-1)
