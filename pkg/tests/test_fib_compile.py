import pytest

from src.core.config import DEFAULT_CONFIG
from src.core.errors import NonConvergent
from src.core.fib_compile import (
    NEEDS_SK,
    BraidModel,
    base_braid,
    fib_row,
    sk_plan,
    total_time_fib,
)


@pytest.fixture
def model():
    return BraidModel.from_config(DEFAULT_CONFIG)


class TestBaseBraid:
    def test_anchor_lengths(self, model):
        assert base_braid(1e-10, model)[0] == 80
        assert base_braid(1e-9, model)[0] == 72

    def test_achieved_error_meets_target(self, model):
        for eps in (0.3, 1e-3, 3.7e-7, 1e-10):
            length, achieved = base_braid(eps, model)
            assert achieved <= eps
            assert model.error_at(length) <= eps * (1 + 1e-6)

    def test_past_l_max(self, model):
        assert base_braid(1e-11, model) is NEEDS_SK

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5])
    def test_bad_target(self, model, eps):
        with pytest.raises(ValueError):
            base_braid(eps, model)


class TestSolovayKitaev:
    def test_brute_force_when_enough(self, model):
        plan = sk_plan(1e-9, model)
        assert (plan.base_length, plan.n_sk, plan.total_length) == (72, 0, 72)

    def test_one_iteration(self, model):
        plan = sk_plan(1e-12, model)
        assert (plan.n_sk, plan.total_length) == (1, 400)
        assert plan.eps_achieved == pytest.approx(1e-15, rel=1e-6)

    def test_deeper_target_more_iterations(self, model):
        plan = sk_plan(1e-30, model)
        assert plan.n_sk == 3
        assert plan.total_length == 80 * 5 ** 3
        assert plan.eps_achieved <= 1e-30

    def test_non_contracting(self):
        weak = BraidModel(alpha=0.001, amp=1.0, l_max=10, sk_c=50.0, sk_len_factor=5)
        with pytest.raises(NonConvergent):
            sk_plan(1e-9, weak)


class TestTotals:
    def test_reference_point(self):
        time_steps, plan = total_time_fib(128)
        assert plan.total_length == 73
        assert time_steps == 1_000_341_504 * 73
        assert time_steps == pytest.approx(7.3025e10, rel=1e-4)

    def test_first_sk_jump(self):
        assert fib_row(275)["n_sk"] == 0
        row = fib_row(276)
        assert row["n_sk"] == 1
        assert row["total_length"] == 400

    def test_time_never_drops_with_L(self):
        times = [fib_row(L)["time_steps"] for L in range(16, 600, 8)]
        assert times == sorted(times)

    def test_per_kind_multipliers(self):
        cfg = DEFAULT_CONFIG.replace(braid_mult_ccnot=3.0)
        base, _ = total_time_fib(128)
        weighted, plan = total_time_fib(128, cfg)
        assert weighted == pytest.approx(base + 2 * 500_170_752 * plan.total_length)
