"""Seeded Monte Carlo simulation of mining, withholding and bet settlement.

One round produces exactly one published block.  The miner draws a pure
strategy from its mix; under ``W_d`` (``W_n``) candidate blocks are mined
and discarded until one triggers ``D`` (not ``D``).  The user draws a pure
betting strategy, and the bet is settled against the published block.

Random streams: blocks are cut into fixed chunks of ``BLOCKS_PER_STREAM``;
chunk ``k`` draws from ``numpy.random.PCG64`` seeded with
``SeedSequence(seed, spawn_key=(k,))``.  Every chunk consumes its stream in
the same order whatever the strategies, so a report depends only on the
config, never on how chunks are scheduled across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    GameParameters,
    MinerStrategy,
    UserStrategy,
    betting_odds,
    published_distribution,
)
from .errors import DomainError, ResourceError

BLOCKS_PER_STREAM = 1 << 16
DEFAULT_ATTEMPT_CAP = 10**6


def derive_forcing_costs(cost_per_attempt: float, p: float) -> tuple[float, float]:
    """Expected cost of forcing ``D`` / not-``D`` when each candidate block costs ``c``.

    Retrying until success takes a geometric number of attempts, so the
    expected number of discarded candidates is ``(1-p)/p`` for ``D`` and
    ``p/(1-p)`` for its complement.
    """
    if cost_per_attempt < 0:
        raise DomainError(f"cost_per_attempt must be >= 0, got {cost_per_attempt}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    c = float(cost_per_attempt)
    return c * (1.0 - p) / p, c * p / (1.0 - p)


@dataclass(frozen=True)
class SimulationConfig:
    params: GameParameters
    miner: MinerStrategy
    user: UserStrategy
    n_blocks: int
    seed: int = 0
    # when set, realised costs are per discarded candidate block and the
    # analytic C_d, C_n are replaced by derive_forcing_costs
    cost_per_attempt: float | None = None
    attempt_cap: int = DEFAULT_ATTEMPT_CAP

    def __post_init__(self):
        problems = []
        if int(self.n_blocks) != self.n_blocks or self.n_blocks < 1:
            problems.append(f"n_blocks must be a positive integer, got {self.n_blocks}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            problems.append(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.cost_per_attempt is not None and not self.cost_per_attempt >= 0:
            problems.append(f"cost_per_attempt must be >= 0, got {self.cost_per_attempt}")
        if self.attempt_cap < 1:
            problems.append(f"attempt_cap must be >= 1, got {self.attempt_cap}")
        if problems:
            raise DomainError(problems)

    @property
    def effective_params(self) -> GameParameters:
        if self.cost_per_attempt is None:
            return self.params
        C_d, C_n = derive_forcing_costs(self.cost_per_attempt, self.params.p)
        return self.params.replace(C_d=C_d, C_n=C_n)


@dataclass(frozen=True)
class SimulationReport:
    n_blocks: int
    published_d: int
    published_n: int
    attempts: int
    empirical_P_d: float
    empirical_P_d_stderr: float
    user_payoff_mean: float
    user_payoff_stderr: float
    miner_payoff_mean: float
    miner_payoff_stderr: float
    realized_withhold_cost: float
    forced_d: int
    forced_n: int
    withhold_cost_d: float
    withhold_cost_n: float

    def rows(self) -> list[tuple[str, float, float | None]]:
        """``(metric, value, stderr)`` rows in a fixed order."""
        return [
            ("n_blocks", self.n_blocks, None),
            ("published_d", self.published_d, None),
            ("published_n", self.published_n, None),
            ("attempts", self.attempts, None),
            ("forced_d", self.forced_d, None),
            ("forced_n", self.forced_n, None),
            ("empirical_P_d", self.empirical_P_d, self.empirical_P_d_stderr),
            ("user_payoff_mean", self.user_payoff_mean, self.user_payoff_stderr),
            ("miner_payoff_mean", self.miner_payoff_mean, self.miner_payoff_stderr),
            ("realized_withhold_cost", self.realized_withhold_cost, None),
            ("withhold_cost_d", self.withhold_cost_d, None),
            ("withhold_cost_n", self.withhold_cost_n, None),
        ]

    @property
    def mean_cost_per_forced_d(self) -> float:
        return self.withhold_cost_d / self.forced_d if self.forced_d else 0.0

    @property
    def mean_cost_per_forced_n(self) -> float:
        return self.withhold_cost_n / self.forced_n if self.forced_n else 0.0


@dataclass
class _Moments:
    """Running count/mean/M2, merged pairwise in chunk order."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        mean = float(x.mean())
        return cls(len(x), mean, float(((x - mean) ** 2).sum()))

    def merge(self, other: "_Moments") -> "_Moments":
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return _Moments(n, mean, m2)

    @property
    def stderr(self) -> float:
        if self.n < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


@dataclass
class _ChunkResult:
    published_d: int
    attempts: int
    forced_d: int
    forced_n: int
    cost_d: float
    cost_n: float
    user: _Moments
    miner: _Moments


def _simulate_chunk(k, size, seed, params, cost_per_attempt, attempt_cap,
                    mix_cdf, mix_omegas, user):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))
    p = params.p
    u_who = rng.random(size)
    u_miner = rng.random(size)
    u_user = rng.random(size)
    honest_d = rng.random(size) < p
    tries_d = rng.geometric(p, size)
    tries_n = rng.geometric(1.0 - p, size)

    who = np.searchsorted(mix_cdf, u_who, side="right")
    who = np.minimum(who, len(mix_omegas) - 1)
    omega_d = mix_omegas[who, 0]
    omega_n = mix_omegas[who, 1]
    force_d = u_miner < omega_d
    force_n = ~force_d & (u_miner < omega_d + omega_n)

    attempts = np.where(force_d, tries_d, np.where(force_n, tries_n, 1))
    if attempts.max() > attempt_cap:
        raise ResourceError(
            f"forced outcome needed {int(attempts.max())} attempts, cap is {attempt_cap}")
    is_d = np.where(force_d, True, np.where(force_n, False, honest_d))

    odds = betting_odds(p, params.epsilon)
    bet_d = u_user < user.lambda_d
    bet_n = ~bet_d & (u_user < user.lambda_d + user.lambda_n)
    user_pay = np.zeros(size)
    user_pay[bet_d] = np.where(is_d[bet_d], odds.beta_d * params.b_d, -params.b_d)
    user_pay[bet_n] = np.where(is_d[bet_n], -params.b_n, odds.beta_n * params.b_n)

    if cost_per_attempt is None:
        cost = np.where(force_d, params.C_d, np.where(force_n, params.C_n, 0.0))
    else:
        cost = (attempts - 1) * cost_per_attempt
    miner_pay = params.R_0 + params.R_w * is_d - user_pay - cost

    return _ChunkResult(
        published_d=int(is_d.sum()),
        attempts=int(attempts.sum()),
        forced_d=int(force_d.sum()),
        forced_n=int(force_n.sum()),
        cost_d=float(cost[force_d].sum()),
        cost_n=float(cost[force_n].sum()),
        user=_Moments.of(user_pay),
        miner=_Moments.of(miner_pay),
    )


def _run(params, mix_shares, mix_strategies, user, n_blocks, seed,
         cost_per_attempt, attempt_cap, workers):
    cdf = np.cumsum(np.asarray(mix_shares, dtype=float))
    cdf[-1] = 1.0
    omegas = np.array([[s.omega_d, s.omega_n] for s in mix_strategies])
    sizes = [min(BLOCKS_PER_STREAM, n_blocks - lo) for lo in range(0, n_blocks, BLOCKS_PER_STREAM)]

    def work(k):
        return _simulate_chunk(k, sizes[k], seed, params, cost_per_attempt,
                               attempt_cap, cdf, omegas, user)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(work, range(len(sizes))))
    else:
        chunks = [work(k) for k in range(len(sizes))]

    user_m, miner_m = _Moments(), _Moments()
    for c in chunks:
        user_m = user_m.merge(c.user)
        miner_m = miner_m.merge(c.miner)
    published_d = sum(c.published_d for c in chunks)
    attempts = sum(c.attempts for c in chunks)
    cost_d = math.fsum(c.cost_d for c in chunks)
    cost_n = math.fsum(c.cost_n for c in chunks)
    if cost_per_attempt is None:
        total_cost = cost_d + cost_n
    else:
        total_cost = (attempts - n_blocks) * cost_per_attempt
    P_hat = published_d / n_blocks
    return SimulationReport(
        n_blocks=n_blocks,
        published_d=published_d,
        published_n=n_blocks - published_d,
        attempts=attempts,
        empirical_P_d=P_hat,
        empirical_P_d_stderr=math.sqrt(P_hat * (1.0 - P_hat) / n_blocks),
        user_payoff_mean=user_m.mean,
        user_payoff_stderr=user_m.stderr,
        miner_payoff_mean=miner_m.mean,
        miner_payoff_stderr=miner_m.stderr,
        realized_withhold_cost=total_cost,
        forced_d=sum(c.forced_d for c in chunks),
        forced_n=sum(c.forced_n for c in chunks),
        withhold_cost_d=cost_d,
        withhold_cost_n=cost_n,
    )


def simulate(config: SimulationConfig, workers: int = 1) -> SimulationReport:
    """Simulate ``config.n_blocks`` published blocks.

    Identical configs give identical reports for any ``workers``.
    """
    return _run(config.params, [1.0], [config.miner], config.user, config.n_blocks,
                config.seed, config.cost_per_attempt, config.attempt_cap, workers)


def aggregate_miners_experiment(shares, params: GameParameters, n_blocks: int,
                                seed: int = 0, user: UserStrategy | None = None,
                                cost_per_attempt: float | None = None,
                                attempt_cap: int = DEFAULT_ATTEMPT_CAP,
                                workers: int = 1) -> tuple[SimulationReport, MinerStrategy]:
    """Pool several miners, each publishing a fixed share of the blocks.

    ``shares`` is a sequence of ``(hash_share, MinerStrategy)``.  Returns the
    pooled report and the share-weighted single miner it should be
    indistinguishable from.
    """
    shares = list(shares)
    if not shares:
        raise DomainError("need at least one miner")
    weights = np.array([float(w) for w, _ in shares])
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError(f"hash shares must be non-negative and sum to 1, got {weights.tolist()}")
    strategies = [s for _, s in shares]
    eq_d = float(sum(w * s.omega_d for w, s in zip(weights, strategies)))
    eq_n = float(sum(w * s.omega_n for w, s in zip(weights, strategies)))
    total = eq_d + eq_n
    if total > 1.0:
        eq_d, eq_n = eq_d / total, eq_n / total
    equivalent = MinerStrategy(eq_d, eq_n)
    # validate through the same path simulate() uses
    config = SimulationConfig(params, equivalent, user or UserStrategy(), n_blocks, seed,
                              cost_per_attempt, attempt_cap)
    report = _run(params, weights, strategies, config.user, n_blocks, seed,
                  cost_per_attempt, attempt_cap, workers)
    return report, equivalent


def analytic_p_d(miner: MinerStrategy, params: GameParameters) -> float:
    return published_distribution(miner, params.p)[0]
