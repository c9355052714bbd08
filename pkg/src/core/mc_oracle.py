# ---------------------------------------------------------------------------
# FILE: src/core/mc_oracle.py
# ---------------------------------------------------------------------------
"""
Monte Carlo factory simulation, used as an independent check on the analytic
expectations in ``distillation`` and ``ising_schedule``.

Two simulations live here:

* Unbounded single-state production samples round outcomes top-down: to get
  k successes at a level with success probability p the factory runs
  k + NegBin(k, p) rounds, and every round needs ``n_raw`` successes from the
  level below. All rounds of a level run side by side.
* Budgeted runs (campaigns, or one state under a qubit budget) are a simpy
  event loop over a ``simpy.Container`` of free qubits. Each batch loads raw
  states into the free qubits, then every ladder level groups its waiting
  inputs into rounds, samples Bernoulli outcomes, and at the round boundary
  returns the inputs of failed rounds (and the spent inputs of good ones) to
  the pool. Unmatched leftovers stay held into the next batch. Time is the
  simpy clock: one round time per level that actually ran.

Nothing in here reads an analytic time; plans only supply error ladders,
success probabilities and the expected raw-state mix used to split the pool.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
import simpy

from src.core.config import DEFAULT_CONFIG, DEFAULT_WORKERS, ModelConfig
from src.core.distillation import (
    A4,
    A8,
    ProtocolSpec,
    a4_plan,
    a8_plan,
    level_errors,
    protocol,
    success_prob,
)
from src.core.errors import ConfigError, InfeasibleBudget
from src.core.gate_budget import GateBudget
from src.core.ising_schedule import SchedulePolicy
from src.utils.rng import trial_generator

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimConfig:
    seed: int = DEFAULT_CONFIG.seed
    trials: int = DEFAULT_CONFIG.trials
    qubit_budget: Optional[int] = None
    workers: int = DEFAULT_WORKERS
    keep_trials: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.qubit_budget is not None and self.qubit_budget < 1:
            raise ConfigError(f"qubit_budget must be >= 1, got {self.qubit_budget}")


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    raw_states: int
    time_steps: float
    peak_qubits: int
    batches: int = 0


@dataclass(frozen=True)
class SimResult:
    trials: int
    seed: int
    mean_raw_states: float
    mean_time_steps: float
    mean_peak_qubits: float
    se_raw_states: float
    se_time_steps: float
    se_peak_qubits: float
    per_trial: tuple[TrialOutcome, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "mean_raw_states": self.mean_raw_states,
            "mean_time_steps": self.mean_time_steps,
            "mean_peak_qubits": self.mean_peak_qubits,
            "se_raw_states": self.se_raw_states,
            "se_time_steps": self.se_time_steps,
            "se_peak_qubits": self.se_peak_qubits,
        }


class QubitPool:
    """
    Fixed pool of qubits backed by a ``simpy.Container`` holding the free ones.
    Every acquire/release keeps in_use + free == capacity.
    """

    def __init__(self, capacity: int, env: Optional[simpy.Environment] = None):
        self.capacity = capacity
        self.env = env if env is not None else simpy.Environment()
        self._free = simpy.Container(self.env, capacity=capacity, init=capacity)
        self.in_use = 0
        self.peak = 0

    @property
    def free(self) -> int:
        return int(self._free.level)

    def _check(self) -> None:
        assert self.in_use + self.free == self.capacity, "qubit pool leaked"
        assert 0 <= self.in_use <= self.capacity

    def acquire(self, n: int) -> None:
        if n <= 0:
            return
        if n > self.free:
            raise InfeasibleBudget(n, self.capacity)
        self._free.get(n)
        self.in_use += n
        self.peak = max(self.peak, self.in_use)
        self._check()

    def release(self, n: int) -> None:
        if n <= 0:
            return
        assert n <= self.in_use, f"releasing {n} qubits with {self.in_use} in use"
        self._free.put(n)
        self.in_use -= n
        self._check()


# ---------- sampling ----------

@dataclass(frozen=True)
class _Ladder:
    spec: ProtocolSpec
    probs: tuple[float, ...]

    @classmethod
    def build(cls, spec: ProtocolSpec, eps0: float, target: float) -> "_Ladder":
        errors = level_errors(spec, eps0, target)
        return cls(spec, tuple(success_prob(spec, e) for e in errors[:-1]))

    @property
    def rounds(self) -> int:
        return len(self.probs)

    def sample_attempts(self, rng: np.random.Generator, outputs: int) -> list[int]:
        """Rounds run at each level (bottom first) to deliver ``outputs`` purified states."""
        attempts = [0] * self.rounds
        need = outputs
        for i in range(self.rounds - 1, -1, -1):
            fails = int(rng.negative_binomial(need, self.probs[i])) if need > 0 else 0
            attempts[i] = need + fails
            need = self.spec.n_raw * attempts[i]
        return attempts

    def raw_for(self, attempts: Sequence[int], outputs: int) -> int:
        return self.spec.n_raw * attempts[0] if attempts else outputs


# ---------- event-driven factory ----------

@dataclass
class _Tally:
    rounds: int = 0
    batches: int = 0
    raw: dict[str, int] = field(default_factory=dict)


@dataclass
class _Lane:
    """
    One ladder inside the factory. ``stock[i]`` counts states waiting as inputs
    to level i and ``stock[-1]`` the finished ones. A lane with ``feeds`` takes
    ``per_round`` ancillas for level i from the finished stock of ``feeds[i]``.
    """

    spec: ProtocolSpec
    probs: tuple[float, ...]
    stock: list[int]
    feeds: tuple["_Lane", ...] = ()
    per_round: int = 0

    @classmethod
    def build(cls, ladder: _Ladder, feeds: Sequence["_Lane"] = ()) -> "_Lane":
        per_round = ladder.spec.ancilla_a8_per_round if feeds else 0
        return cls(ladder.spec, ladder.probs, [0] * (ladder.rounds + 1), tuple(feeds), per_round)

    def load(self, pool: QubitPool, tally: _Tally, n: int) -> None:
        pool.acquire(n * self.spec.qubits_per_raw)
        self.stock[0] += n
        tally.raw[self.spec.name] = tally.raw.get(self.spec.name, 0) + n

    def run(
        self,
        env: simpy.Environment,
        pool: QubitPool,
        rng: np.random.Generator,
        tally: _Tally,
    ) -> Iterator[simpy.Event]:
        n_raw = self.spec.n_raw
        for level, p in enumerate(self.probs):
            feed = self.feeds[level] if self.feeds else None
            if feed is not None:
                yield from feed.run(env, pool, rng, tally)
            rounds = self.stock[level] // n_raw
            if feed is not None:
                rounds = min(rounds, feed.stock[-1] // self.per_round)
            if rounds == 0:
                continue

            wins = int(rng.binomial(rounds, p))
            self.stock[level] -= rounds * n_raw
            freed = (rounds * n_raw - wins) * self.spec.qubits_per_raw
            if feed is not None:
                feed.stock[-1] -= rounds * self.per_round
                freed += rounds * self.per_round * feed.spec.qubits_per_raw
            tally.rounds += rounds

            yield env.timeout(self.spec.effective_round_time)
            self.stock[level + 1] += wins
            pool.release(freed)

    def deliver(self, pool: QubitPool) -> int:
        done = self.stock[-1]
        self.stock[-1] = 0
        pool.release(done * self.spec.qubits_per_raw)
        return done

    def drain(self, pool: QubitPool) -> None:
        """Discard everything in flight once the order is filled."""
        pool.release(sum(self.stock) * self.spec.qubits_per_raw)
        self.stock = [0] * len(self.stock)
        for feed in self.feeds:
            feed.drain(pool)


@dataclass
class _Order:
    lane: _Lane
    demand: int
    # (lane that takes raw states, expected raw states per delivered unit)
    entries: tuple[tuple[_Lane, float], ...]
    delivered: int = 0

    @property
    def remaining(self) -> int:
        return max(0, self.demand - self.delivered)


@dataclass(frozen=True)
class _OrderSpec:
    ladder: _Ladder
    raw_per_unit: float
    feeds: tuple[tuple[_Ladder, float], ...] = ()

    def open(self, demand: int) -> _Order:
        feed_lanes = tuple(_Lane.build(ladder) for ladder, _ in self.feeds)
        lane = _Lane.build(self.ladder, feed_lanes)
        entries = ((lane, self.raw_per_unit),) + tuple(
            (feed, per_unit) for feed, (_, per_unit) in zip(feed_lanes, self.feeds)
        )
        return _Order(lane, demand, entries)


def _order_spec(
    species: str,
    eps0_a4: float,
    eps0_a8: float,
    target: float,
    cfg: ModelConfig,
) -> _OrderSpec:
    spec8 = protocol(A8, cfg)
    if species == A8:
        plan = a8_plan(eps0_a8, target, cfg)
        return _OrderSpec(_Ladder.build(spec8, eps0_a8, target), plan.expected_raw)
    plan = a4_plan(eps0_a4, eps0_a8, target, cfg)
    feeds = tuple(
        (_Ladder.build(spec8, eps0_a8, b.target), b.expected_count * b.plan.expected_raw)
        for b in plan.ancillas
    )
    return _OrderSpec(_Ladder.build(protocol(A4, cfg), eps0_a4, target), plan.expected_raw, feeds)


def _load(pool: QubitPool, orders: Sequence[_Order], tally: _Tally) -> int:
    """Split the free qubits over open orders by their expected raw-qubit mix."""
    free = pool.free
    parts = [
        (lane, order, per_unit, order.demand * per_unit * lane.spec.qubits_per_raw)
        for order in orders
        for lane, per_unit in order.entries
    ]
    total = math.fsum(w for *_, w in parts)
    if total <= 0:
        return 0
    loaded = 0
    for lane, order, per_unit, weight in parts:
        share = math.floor(free * (weight / total)) // lane.spec.qubits_per_raw
        want = math.ceil(order.remaining * per_unit - 1e-9)
        n = min(share, want)
        if n > 0:
            lane.load(pool, tally, n)
            loaded += n
    return loaded


def _factory(
    env: simpy.Environment,
    pool: QubitPool,
    orders: Sequence[_Order],
    rng: np.random.Generator,
    tally: _Tally,
) -> Iterator[simpy.Event]:
    while True:
        open_orders = [o for o in orders if o.remaining > 0]
        if not open_orders:
            return
        loaded = _load(pool, open_orders, tally)
        rounds_before = tally.rounds
        yield env.all_of([env.process(o.lane.run(env, pool, rng, tally)) for o in open_orders])

        delivered = 0
        for order in open_orders:
            got = order.lane.deliver(pool)
            order.delivered += got
            delivered += got
            if order.remaining == 0:
                order.lane.drain(pool)
        tally.batches += 1
        if not loaded and not delivered and tally.rounds == rounds_before:
            # held leftovers fill the pool and nothing can move
            raise InfeasibleBudget(pool.in_use + 1, pool.capacity)


def _run_factory(
    orders: Sequence[_Order],
    qubit_budget: int,
    rng: np.random.Generator,
) -> tuple[_Tally, float, int]:
    env = simpy.Environment()
    pool = QubitPool(qubit_budget, env)
    tally = _Tally()
    env.run(until=env.process(_factory(env, pool, orders, rng, tally)))
    return tally, float(env.now), pool.peak


# ---------- aggregation ----------

def _summarize(outcomes: list[TrialOutcome], sim: SimConfig) -> SimResult:
    n = len(outcomes)

    def mean_se(values: list[float]) -> tuple[float, float]:
        mean = math.fsum(values) / n
        if n < 2:
            return mean, 0.0
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        return mean, math.sqrt(var / n)

    raw_mean, raw_se = mean_se([float(o.raw_states) for o in outcomes])
    time_mean, time_se = mean_se([float(o.time_steps) for o in outcomes])
    peak_mean, peak_se = mean_se([float(o.peak_qubits) for o in outcomes])
    return SimResult(
        trials=n,
        seed=sim.seed,
        mean_raw_states=raw_mean,
        mean_time_steps=time_mean,
        mean_peak_qubits=peak_mean,
        se_raw_states=raw_se,
        se_time_steps=time_se,
        se_peak_qubits=peak_se,
        per_trial=tuple(outcomes) if sim.keep_trials else (),
    )


def _run_trials(fn: Callable[[int], TrialOutcome], sim: SimConfig) -> list[TrialOutcome]:
    """Trials in index order regardless of which worker finished first."""
    workers = max(1, sim.workers)
    if workers == 1 or sim.trials == 1:
        return [fn(i) for i in range(sim.trials)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(sim.trials)))


# ---------- single state ----------

def simulate_state_production(
    species: str,
    eps0: float,
    target: float,
    sim: SimConfig = SimConfig(),
    cfg: ModelConfig = DEFAULT_CONFIG,
    eps0_a8: Optional[float] = None,
) -> SimResult:
    """
    Produce one purified state per trial. For |a4> every round also draws
    ``ancilla_a8_per_round`` |a8> states distilled from ``eps0_a8`` (defaults
    to ``eps0``) to the error that round produces.

    Without a qubit budget every level runs all its rounds at once. With one,
    the state comes out of the batch factory and the peak is the pool's.
    ``mean_raw_states`` counts raw states of the requested species only.
    """
    spec = protocol(species, cfg)
    ladder = _Ladder.build(spec, eps0, target)
    eps8 = eps0 if eps0_a8 is None else eps0_a8

    sub_ladders: list[_Ladder] = []
    if species == A4:
        spec8 = protocol(A8, cfg)
        errors = level_errors(spec, eps0, target)
        success_prob(spec8, eps8)  # cap check even when no round needs ancillas
        if spec.ancilla_a8_per_round:
            sub_ladders = [_Ladder.build(spec8, eps8, errors[i + 1]) for i in range(ladder.rounds)]
    else:
        spec8 = spec

    if sim.qubit_budget is not None:
        order_spec = _order_spec(species, eps0, eps8 if species == A4 else eps0, target, cfg)
        qb = sim.qubit_budget

        def one(i: int) -> TrialOutcome:
            rng = trial_generator(sim.seed, i)
            tally, now, peak = _run_factory([order_spec.open(1)], qb, rng)
            return TrialOutcome(index=i, raw_states=tally.raw.get(species, 0), time_steps=now,
                                peak_qubits=peak, batches=tally.batches)
    else:
        def one(i: int) -> TrialOutcome:
            rng = trial_generator(sim.seed, i)
            attempts = ladder.sample_attempts(rng, 1)
            raw = ladder.raw_for(attempts, 1)
            qubits = raw * spec.qubits_per_raw
            time_steps = 0.0
            for level in range(ladder.rounds):
                if sub_ladders:
                    sub = sub_ladders[level]
                    count = spec.ancilla_a8_per_round * attempts[level]
                    sub_raw = sub.raw_for(sub.sample_attempts(rng, count), count)
                    qubits += sub_raw * spec8.qubits_per_raw
                    time_steps += sub.rounds * spec8.effective_round_time
                time_steps += spec.effective_round_time
            return TrialOutcome(index=i, raw_states=raw, time_steps=time_steps, peak_qubits=qubits)

    result = _summarize(_run_trials(one, sim), sim)
    log.info("[mc] %s eps0=%g target=%g trials=%d raw=%.4g±%.2g",
             species, eps0, target, sim.trials, result.mean_raw_states, result.se_raw_states)
    return result


# ---------- campaign ----------

def demand_budget(species: str, demand: int, target: float) -> GateBudget:
    """A bare demand of ``demand`` purified states of one species at ``target``."""
    if demand < 0:
        raise ValueError(f"demand must be >= 0, got {demand}")
    if species not in (A4, A8):
        raise ConfigError(f"unknown species {species!r}")
    return GateBudget(
        L=0,
        n_total=0,
        n_not=0,
        n_cnot=0,
        n_ccnot=0,
        eps_gate=target,
        demand_a4=demand if species == A4 else 0,
        demand_a8=demand if species == A8 else 0,
    )


def simulate_campaign(
    budget: GateBudget,
    eps0_a4: float,
    eps0_a8: float,
    policy: SchedulePolicy = SchedulePolicy(),
    sim: SimConfig = SimConfig(),
    cfg: ModelConfig = DEFAULT_CONFIG,
) -> SimResult:
    """
    Empirical t_dist and peak qubits for the whole demand in ``budget``,
    run through the batch factory on the policy's qubit budget.
    ``mean_raw_states`` counts raw states of both species.
    """
    target = budget.eps_gate
    qb = sim.qubit_budget or policy.resolve_budget(budget, cfg)

    orders: list[tuple[_OrderSpec, int]] = []
    single = 0
    if budget.demand_a4:
        orders.append((_order_spec(A4, eps0_a4, eps0_a8, target, cfg), budget.demand_a4))
        single = max(single, a4_plan(eps0_a4, eps0_a8, target, cfg).qubits_peak)
    if budget.demand_a8:
        orders.append((_order_spec(A8, eps0_a4, eps0_a8, target, cfg), budget.demand_a8))
        single = max(single, a8_plan(eps0_a8, target, cfg).qubits_peak)
    if single > qb:
        raise InfeasibleBudget(single, qb)

    def one(i: int) -> TrialOutcome:
        rng = trial_generator(sim.seed, i)
        tally, now, peak = _run_factory([spec.open(demand) for spec, demand in orders], qb, rng)
        return TrialOutcome(
            index=i,
            raw_states=sum(tally.raw.values()),
            time_steps=now,
            peak_qubits=peak,
            batches=tally.batches,
        )

    result = _summarize(_run_trials(one, sim), sim)
    log.info("[mc] campaign demand=%d/%d budget=%d trials=%d t_dist=%.4g±%.2g",
             budget.demand_a4, budget.demand_a8, qb, sim.trials,
             result.mean_time_steps, result.se_time_steps)
    return result
