import math

import numpy as np
import pytest

from src.core.config import DEFAULT_CONFIG
from src.core.distillation import (
    A4,
    A8,
    a4_plan,
    a8_plan,
    attempts_per_level,
    level_errors,
    monotonize,
    output_error,
    protocol,
    rounds_needed,
    success_prob,
)
from src.core.errors import AboveThreshold, ConfigError


class TestErrorMap:
    def test_a8_quadratic(self):
        spec = protocol(A8)
        assert output_error(spec, 0.1) == pytest.approx(0.01 / 0.38)

    def test_a4_cubic(self):
        spec = protocol(A4)
        assert output_error(spec, 0.01) == pytest.approx(35e-6)

    def test_zero_stays_zero(self):
        assert output_error(protocol(A8), 0.0) == 0.0

    @pytest.mark.parametrize("name,cap", [(A8, 0.38), (A4, 0.14)])
    def test_cap_is_exclusive(self, name, cap):
        spec = protocol(name)
        with pytest.raises(AboveThreshold) as exc:
            output_error(spec, cap)
        assert exc.value.protocol == name
        assert exc.value.cap == cap

    @pytest.mark.parametrize("name,eps,rounds", [(A8, 0.379, 13), (A4, 0.139, 5)])
    def test_just_below_cap_is_admissible(self, name, eps, rounds):
        spec = protocol(name)
        assert output_error(spec, eps) < eps
        assert success_prob(spec, eps) > 0
        assert rounds_needed(spec, eps, 1e-9) == rounds

    def test_just_below_cap_plans(self):
        assert a8_plan(0.379, 1e-9).rounds == 13
        assert a4_plan(0.139, 0.379, 1e-9).rounds == 5

    @pytest.mark.parametrize("name", [A8, A4])
    def test_map_contracts_below_cap(self, name):
        spec = protocol(name)
        grid = np.linspace(0.0, spec.input_cap, 4001)[1:-1]
        assert all(output_error(spec, float(e)) < e for e in grid)

    def test_a8_cap_is_the_fixed_point(self):
        spec = protocol(A8)
        k = spec.map_exponent
        assert spec.map_coeff * spec.input_cap ** (k - 1) == pytest.approx(1.0)
        assert output_error(spec, 0.379999) == pytest.approx(0.379999, rel=1e-4)

    def test_levels_strictly_decrease(self):
        errors = level_errors(protocol(A8), 0.3, 1e-13)
        assert all(b < a for a, b in zip(errors, errors[1:]))
        assert errors[-1] <= 1e-13 < errors[-2]

    def test_non_contracting_map_is_config_error(self):
        cfg = DEFAULT_CONFIG.replace(a8_map_coeff=10.0, a8_map_exponent=1.0)
        with pytest.raises(ConfigError, match="does not contract"):
            level_errors(protocol(A8, cfg), 0.01, 1e-9)

    def test_unknown_protocol(self):
        with pytest.raises(ConfigError):
            protocol("A7")


class TestSuccessModel:
    def test_linear(self):
        assert success_prob(protocol(A8), 0.19) == pytest.approx(0.5)

    def test_quadratic(self):
        spec = protocol(A8, DEFAULT_CONFIG.replace(success_model="quadratic"))
        assert success_prob(spec, 0.19) == pytest.approx(0.25)

    def test_unity_gives_exact_powers(self):
        cfg = DEFAULT_CONFIG.replace(success_model="unity")
        plan = a8_plan(0.01, 1e-9, cfg)
        assert plan.rounds == 3
        assert plan.expected_raw == 4 ** 3

    def test_attempts_feed_the_level_above(self):
        spec = protocol(A8)
        errors = level_errors(spec, 0.1, 1e-9)
        attempts = attempts_per_level(spec, errors)
        for i in range(len(attempts) - 1):
            assert attempts[i] * success_prob(spec, errors[i]) == pytest.approx(4 * attempts[i + 1])


class TestA8Plan:
    def test_reference_point(self):
        plan = a8_plan(0.01, 1e-9)
        assert plan.rounds == 3
        assert plan.expected_raw == pytest.approx(65.775, rel=1e-4)
        assert plan.qubits_peak == 132
        assert plan.time_steps == 300
        assert plan.level_errors[-1] <= 1e-9

    def test_noisier_input(self):
        plan = a8_plan(0.1, 1e-9)
        assert plan.rounds == 4
        assert plan.expected_raw == pytest.approx(375.08, rel=1e-4)

    def test_already_good_enough(self):
        plan = a8_plan(1e-10, 1e-9)
        assert plan.rounds == 0
        assert plan.expected_raw == 1.0
        assert plan.time_steps == 0

    def test_tighter_target_costs_more(self):
        plans = [a8_plan(0.05, t) for t in (1e-9, 1e-11, 1e-13)]
        assert [p.rounds for p in plans] == sorted(p.rounds for p in plans)
        assert plans[0].expected_raw <= plans[-1].expected_raw

    def test_rounds_needed_matches_plan(self):
        assert rounds_needed(protocol(A8), 0.2, 1e-11) == a8_plan(0.2, 1e-11).rounds

    def test_above_cap(self):
        with pytest.raises(AboveThreshold):
            a8_plan(0.38, 1e-9)

    def test_ops_split(self):
        plan = a8_plan(0.01, 1e-9)
        attempts = math.fsum(plan.attempts)
        assert plan.ops_braid == pytest.approx(93 * attempts)
        assert plan.ops_measure == pytest.approx(7 * attempts)

    def test_measurement_time_factor(self):
        cfg = DEFAULT_CONFIG.replace(measure_time_factor=10.0)
        assert protocol(A8, cfg).effective_round_time == pytest.approx(163.0)
        assert a8_plan(0.01, 1e-9, cfg).time_steps == pytest.approx(3 * 163.0)


class TestA4Plan:
    def test_reference_point(self):
        plan = a4_plan(0.01, 0.01, 1e-9)
        assert plan.rounds == 2
        assert plan.expected_raw == pytest.approx(242.368, rel=1e-4)
        assert [b.expected_count for b in plan.ancillas] == pytest.approx([581.684, 36.009], rel=1e-4)
        assert plan.ancilla_raw == pytest.approx(11_933.6, rel=1e-4)
        assert plan.qubits_peak == pytest.approx(24_110, abs=1)
        assert plan.time_steps == 6_000_500

    def test_ancillas_reach_their_round_error(self):
        plan = a4_plan(0.05, 0.2, 1e-12)
        for batch in plan.ancillas:
            assert batch.target == plan.level_errors[batch.level + 1]
            assert batch.plan.level_errors[-1] <= batch.target

    def test_qubits_split(self):
        plan = a4_plan(0.01, 0.01, 1e-9)
        assert plan.own_qubits == pytest.approx(plan.expected_raw)
        assert plan.qubits_expected == pytest.approx(plan.own_qubits + plan.ancilla_qubits)
        assert plan.to_dict()["qubits_ancilla"] == plan.ancilla_qubits

    def test_no_ancillas_configured(self):
        cfg = DEFAULT_CONFIG.replace(ancilla_a8_per_round=0)
        plan = a4_plan(0.01, 0.01, 1e-9, cfg)
        assert plan.ancillas == ()
        assert plan.time_steps == 2 * 3_000_000

    @pytest.mark.parametrize("eps4,eps8", [(0.14, 0.01), (0.01, 0.38), (0.2, 0.5)])
    def test_above_cap(self, eps4, eps8):
        with pytest.raises(AboveThreshold):
            a4_plan(eps4, eps8, 1e-9)


def test_monotonize_running_max():
    curve = [(0.1, 5.0), (0.2, 3.0), (0.3, 7.0), (0.4, 6.0)]
    assert monotonize(curve) == [(0.1, 5.0), (0.2, 5.0), (0.3, 7.0), (0.4, 7.0)]
    assert monotonize([]) == []
