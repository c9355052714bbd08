import math

import pytest

from src.core.config import DEFAULT_CONFIG
from src.core.errors import AboveThreshold, ConfigError, InfeasibleBudget
from src.core.gate_budget import gate_counts
from src.core.ising_schedule import (
    BATCH_ALL,
    INTERLEAVED,
    REGIME_A,
    REGIME_B,
    REGIME_C,
    SchedulePolicy,
    algorithm_ops,
    algorithm_time,
    classify_and_schedule,
    distillation_campaign,
)
from src.core.mc_oracle import demand_budget


def test_algorithm_time_at_128():
    b = gate_counts(128)
    assert algorithm_time(b) == 68_623_427_180
    braid, measure = algorithm_ops(b)
    assert measure == 400_136_602 + 8 * 500_170_752
    assert braid + measure == 68_623_427_180


def test_default_budget_is_three_quarters_of_gates():
    b = gate_counts(128)
    assert SchedulePolicy().resolve_budget(b) == 750_256_128
    assert SchedulePolicy(tradeoff_factor=2.0).resolve_budget(b) == 375_128_064
    assert SchedulePolicy(qubit_budget=1234).resolve_budget(b) == 1234


def test_policy_validation():
    with pytest.raises(ConfigError):
        SchedulePolicy(mode="sometimes")
    with pytest.raises(ConfigError):
        SchedulePolicy(tradeoff_factor=0)
    with pytest.raises(ConfigError):
        SchedulePolicy(qubit_budget=0)


class TestCampaign:
    def test_batches_fill_the_budget(self):
        budget = demand_budget("A8", 1000, 1e-9)
        c = distillation_campaign(budget, 0.01, 0.1, SchedulePolicy(qubit_budget=10_000))
        assert c.slots == pytest.approx(750_170, rel=1e-4)
        assert c.batches == 76
        assert c.batch_time == 400
        assert c.t_dist == 76 * 400
        assert c.peak_qubits == 10_000

    def test_fewer_qubits_more_batches(self):
        budget = demand_budget("A8", 1000, 1e-9)
        c = distillation_campaign(budget, 0.01, 0.1, SchedulePolicy(qubit_budget=10_000))
        assert c.t_dist_with_budget(5_000) == math.ceil(c.slots / 5_000) * 400

    def test_no_demand(self):
        c = distillation_campaign(demand_budget("A4", 0, 1e-9), 0.01, 0.01, SchedulePolicy(qubit_budget=10))
        assert (c.slots, c.batches, c.t_dist, c.peak_qubits) == (0.0, 0, 0.0, 0)

    def test_single_state_over_budget(self):
        with pytest.raises(InfeasibleBudget) as exc:
            distillation_campaign(gate_counts(128), 0.01, 0.01, SchedulePolicy(qubit_budget=100))
        assert exc.value.qubit_budget == 100
        assert exc.value.single_state_qubits > 100


class TestRegimes:
    def test_reference_point_is_batched(self):
        r = classify_and_schedule(128, 0.01, 0.01)
        assert r.regime == REGIME_B
        assert r.mode == BATCH_ALL
        assert r.feasible
        assert r.batches == pytest.approx(113_112, rel=1e-4)
        assert r.t_dist == pytest.approx(6.787e11, rel=1e-3)
        assert r.t_total == r.t_dist + r.t_alg
        assert r.t_total == pytest.approx(7.47e11, rel=1e-3)
        assert r.distill_qubits == 750_256_128
        assert r.register_qubits == 259
        assert r.total_anyons == 3_001_025_548

    def test_measurement_share(self):
        r = classify_and_schedule(128, 0.01, 0.01)
        assert 0.06 < r.measurement_fraction < 0.07

    def test_slow_measurements_stretch_the_run(self):
        base = classify_and_schedule(128, 0.01, 0.01)
        slow = classify_and_schedule(128, 0.01, 0.01, cfg=DEFAULT_CONFIG.replace(measure_time_factor=10.0))
        assert slow.t_total / base.t_total == pytest.approx(1.625, rel=1e-2)

    def test_clean_inputs_interleave(self):
        r = classify_and_schedule(128, 1e-4, 1e-4)
        assert r.regime == REGIME_A
        assert r.mode == INTERLEAVED
        assert r.distill_qubits < r.qubit_budget
        assert r.t_total == max(r.t_alg, r.t_dist) + r.batch_time
        assert r.t_dist + r.batch_time <= (1 + DEFAULT_CONFIG.interleave_slack) * r.t_alg

    def test_forced_batching_in_regime_a(self):
        auto = classify_and_schedule(128, 1e-4, 1e-4)
        batched = classify_and_schedule(128, 1e-4, 1e-4, SchedulePolicy(mode=BATCH_ALL))
        assert batched.regime == REGIME_A
        assert batched.distill_qubits >= auto.distill_qubits
        assert batched.t_total == batched.t_dist + batched.t_alg

    @pytest.mark.parametrize("eps8,regime", [
        (0.01, REGIME_A),
        (0.07, REGIME_A),
        (0.08, REGIME_B),
        (0.2, REGIME_B),
        (0.35, REGIME_B),
        (0.36, REGIME_C),
    ])
    def test_regime_scan_at_512(self, eps8, regime):
        assert classify_and_schedule(512, 0.01, eps8).regime == regime

    def test_regime_c_report(self):
        r = classify_and_schedule(128, 0.01, 0.01, SchedulePolicy(qubit_budget=100))
        assert r.regime == REGIME_C
        assert not r.feasible
        assert math.isinf(r.t_total) and math.isinf(r.total_anyons)
        assert r.t_alg == 68_623_427_180

    def test_budget_of_exactly_one_state_is_regime_c(self):
        single = distillation_campaign(gate_counts(128), 0.01, 0.01).single_state_qubits
        edge = SchedulePolicy(qubit_budget=single)
        assert distillation_campaign(gate_counts(128), 0.01, 0.01, edge).batches > 0

        at_edge = classify_and_schedule(128, 0.01, 0.01, edge)
        assert at_edge.regime == REGIME_C
        assert not at_edge.feasible
        assert at_edge.single_state_qubits == single

        above = classify_and_schedule(128, 0.01, 0.01, SchedulePolicy(qubit_budget=single + 1))
        assert above.regime == REGIME_B
        assert above.feasible

    def test_above_cap_propagates(self):
        with pytest.raises(AboveThreshold):
            classify_and_schedule(128, 0.2, 0.01)

    def test_tradeoff_halves_space(self):
        full = classify_and_schedule(128, 0.01, 0.01)
        half = classify_and_schedule(128, 0.01, 0.01, SchedulePolicy(tradeoff_factor=2.0))
        assert half.distill_qubits == pytest.approx(full.distill_qubits / 2, rel=1e-6)
        assert half.t_dist == pytest.approx(2 * full.t_dist, rel=1e-3)


def test_large_L_returns_to_regime_a():
    assert classify_and_schedule(4096, 0.01, 0.2).regime == REGIME_A


def test_one_state_one_batch():
    budget = demand_budget("A8", 1, 1e-9)
    c = distillation_campaign(budget, 0.01, 0.01, SchedulePolicy(qubit_budget=1000))
    assert c.batches == 1
    assert c.t_dist == 3 * DEFAULT_CONFIG.a8_round_time


def test_more_qubits_never_slower():
    totals = [
        classify_and_schedule(128, 0.01, 0.05, SchedulePolicy(qubit_budget=q, mode=BATCH_ALL)).t_total
        for q in (10**8, 3 * 10**8, 10**9, 3 * 10**9)
    ]
    assert totals == sorted(totals, reverse=True)


def test_full_execution_costs_widen_regime_a_at_512():
    full = DEFAULT_CONFIG.replace(exec_not=2, exec_cnot=30, exec_ccnot=250)
    assert algorithm_time(gate_counts(512), full) == 2 * algorithm_time(gate_counts(512))
    assert classify_and_schedule(512, 0.01, 0.1).regime == REGIME_B
    assert classify_and_schedule(512, 0.01, 0.1, cfg=full).regime == REGIME_A
