import numpy as np
import pytest

from withholding_game import (
    DomainError,
    GameParameters,
    MinerStrategy,
    ResourceError,
    SimulationConfig,
    UserStrategy,
    aggregate_miners_experiment,
    derive_forcing_costs,
    miner_payoff,
    published_distribution,
    simulate,
    user_payoff,
)
from withholding_game.simulation import BLOCKS_PER_STREAM

N_CASES = 10_000


def test_forcing_costs():
    assert derive_forcing_costs(1, 0.4) == pytest.approx((1.5, 2 / 3))
    assert derive_forcing_costs(1, 0.5) == pytest.approx((1.0, 1.0))
    assert derive_forcing_costs(0, 0.3) == (0.0, 0.0)


def test_forcing_costs_match_retry_count():
    # expected discarded candidates before the wanted outcome, by simulation
    rng = np.random.default_rng(50)
    tries = rng.geometric(0.4, 10**6) - 1
    assert tries.mean() == pytest.approx(derive_forcing_costs(1, 0.4)[0], abs=4 * tries.std() / 1e3)


def test_config_validation(mixed_params):
    with pytest.raises(DomainError):
        SimulationConfig(mixed_params, MinerStrategy(), UserStrategy(), 0)
    with pytest.raises(DomainError):
        SimulationConfig(mixed_params, MinerStrategy(), UserStrategy(), 10, seed=-1)
    with pytest.raises(DomainError):
        SimulationConfig(mixed_params, MinerStrategy(), UserStrategy(), 10, cost_per_attempt=-1.0)


def test_honest_abstain(mixed_params):
    r = simulate(SimulationConfig(mixed_params, MinerStrategy(0, 0), UserStrategy(0, 0), 10**6, seed=42))
    assert abs(r.empirical_P_d - 0.4) <= 3 * np.sqrt(0.24 / 1e6)
    assert r.attempts == r.n_blocks and r.realized_withhold_cost == 0
    assert r.user_payoff_mean == 0.0


def test_forcing_always_publishes_d():
    params = GameParameters(p=0.15, epsilon=0.05, R_w=3.0, b_d=1.0, C_d=0.3, C_n=0.6)
    r = simulate(SimulationConfig(params, MinerStrategy(1, 0), UserStrategy(0.3, 0.3), 5000, seed=1))
    assert r.empirical_P_d == 1.0 and r.published_n == 0
    assert r.attempts >= r.n_blocks


def test_honest_bettor_loses_edge(mixed_params):
    r = simulate(SimulationConfig(mixed_params, MinerStrategy(0, 0), UserStrategy(1, 0), 10**6, seed=42))
    assert abs(r.user_payoff_mean + 0.4) <= 3 * r.user_payoff_stderr


def test_report_invariants():
    rng = np.random.default_rng(51)
    for seed in range(300):
        params = GameParameters(p=float(rng.uniform(0.05, 0.95)), epsilon=0.1, R_w=5.0, b_d=2.0,
                                C_d=0.5, C_n=0.5)
        (_, a, b), (_, c, d) = rng.dirichlet([1, 1, 1], 2)
        r = simulate(SimulationConfig(params, MinerStrategy(a, b), UserStrategy(c, d),
                                      int(rng.integers(1, 500)), seed=seed))
        assert r.published_d + r.published_n == r.n_blocks
        assert r.empirical_P_d == r.published_d / r.n_blocks
        assert r.attempts >= r.n_blocks


def test_determinism():
    rng = np.random.default_rng(52)
    params = GameParameters(p=0.3, epsilon=0.05, R_w=5.0, b_d=2.0, b_n=1.5, C_d=0.5, C_n=0.7)
    for _ in range(N_CASES):
        (_, a, b), (_, c, d) = rng.dirichlet([1, 1, 1], 2)
        cfg = SimulationConfig(params, MinerStrategy(a, b), UserStrategy(c, d),
                               int(rng.integers(1, 40)), seed=int(rng.integers(0, 2**63)),
                               cost_per_attempt=rng.choice([None, 0.25]))
        assert simulate(cfg) == simulate(cfg)


def test_independent_of_workers(mixed_params):
    cfg = SimulationConfig(mixed_params, MinerStrategy(0.2, 0.1), UserStrategy(0.4, 0.2),
                           3 * BLOCKS_PER_STREAM + 17, seed=7, cost_per_attempt=0.3)
    base = simulate(cfg, workers=1)
    assert simulate(cfg, workers=2) == base
    assert simulate(cfg, workers=5) == base


def test_seed_matters(mixed_params):
    a = simulate(SimulationConfig(mixed_params, MinerStrategy(), UserStrategy(1, 0), 1000, seed=1))
    b = simulate(SimulationConfig(mixed_params, MinerStrategy(), UserStrategy(1, 0), 1000, seed=2))
    assert a != b


@pytest.mark.parametrize("miner,user,cost", [
    ((0.0, 0.0), (1.0, 0.0), None),
    ((0.3, 0.1), (0.5, 0.2), None),
    ((0.1, 0.4), (0.2, 0.6), 0.2),
    ((0.6, 0.0), (0.3, 0.0), 0.5),
])
def test_payoffs_consistent_with_analytic(mixed_params, miner, user, cost):
    cfg = SimulationConfig(mixed_params, MinerStrategy(*miner), UserStrategy(*user), 10**6,
                           seed=99, cost_per_attempt=cost)
    r = simulate(cfg)
    realized = mixed_params.replace(C_d=r.mean_cost_per_forced_d, C_n=r.mean_cost_per_forced_n)
    m, u = MinerStrategy(*miner), UserStrategy(*user)
    assert abs(r.user_payoff_mean - user_payoff(u, m, realized)) <= 4 * r.user_payoff_stderr
    assert abs(r.miner_payoff_mean - miner_payoff(u, m, realized)) <= 4 * r.miner_payoff_stderr
    P_d = published_distribution(m, mixed_params.p)[0]
    assert abs(r.empirical_P_d - P_d) <= 4 * np.sqrt(P_d * (1 - P_d) / 1e6)


def test_attempt_accounting():
    rng = np.random.default_rng(53)
    for seed in range(500):
        params = GameParameters(p=float(rng.uniform(0.05, 0.95)), epsilon=0.1, R_w=5.0, b_d=1.0)
        c = float(rng.uniform(0, 3))
        _, a, b = rng.dirichlet([1, 1, 1])
        r = simulate(SimulationConfig(params, MinerStrategy(a, b), UserStrategy(), 200,
                                      seed=seed, cost_per_attempt=c))
        assert r.realized_withhold_cost == (r.attempts - r.n_blocks) * c
        assert r.withhold_cost_d + r.withhold_cost_n == pytest.approx(r.realized_withhold_cost)


def test_analytic_costs_charged_per_forced_block(mixed_params):
    r = simulate(SimulationConfig(mixed_params, MinerStrategy(0.3, 0.2), UserStrategy(), 5000, seed=3))
    assert r.realized_withhold_cost == pytest.approx(r.forced_d * 1.2 + r.forced_n * 0.6)


def test_attempt_cap():
    params = GameParameters(p=0.02, epsilon=0.1, R_w=5.0, b_d=1.0)
    with pytest.raises(ResourceError):
        simulate(SimulationConfig(params, MinerStrategy(1, 0), UserStrategy(), 1000, attempt_cap=3))


class TestAggregation:
    def test_half_forcing(self, mixed_params):
        report, eq = aggregate_miners_experiment(
            [(0.5, MinerStrategy(0, 0)), (0.5, MinerStrategy(1, 0))], mixed_params, 10**6, seed=5)
        assert eq == MinerStrategy(0.5, 0.0)
        target = published_distribution(eq, 0.4)[0]
        assert target == pytest.approx(0.7)
        assert abs(report.empirical_P_d - target) <= 4 * np.sqrt(0.21 / 1e6)

    def test_single_honest(self, mixed_params):
        report, eq = aggregate_miners_experiment([(1.0, MinerStrategy())], mixed_params, 10**5, seed=6)
        assert eq == MinerStrategy(0, 0)
        assert abs(report.empirical_P_d - 0.4) <= 4 * np.sqrt(0.24 / 1e5)

    def test_three_way(self, mixed_params):
        third = 1 / 3
        report, eq = aggregate_miners_experiment(
            [(third, MinerStrategy(1, 0)), (third, MinerStrategy(0, 1)), (third, MinerStrategy(0, 0))],
            mixed_params, 10**6, seed=8)
        assert (eq.omega_d, eq.omega_n) == pytest.approx((third, third))
        target = published_distribution(eq, 0.4)[0]
        assert target == pytest.approx(0.4666667, abs=1e-7)
        assert abs(report.empirical_P_d - target) <= 4 * np.sqrt(target * (1 - target) / 1e6)

    def test_equivalent_matches_single_miner_in_payoff(self, mixed_params):
        user = UserStrategy(0.5, 0.0)
        report, eq = aggregate_miners_experiment(
            [(0.25, MinerStrategy(0.8, 0)), (0.75, MinerStrategy(0, 0.2))], mixed_params, 10**6,
            seed=9, user=user)
        assert abs(report.user_payoff_mean - user_payoff(user, eq, mixed_params)) <= 4 * report.user_payoff_stderr

    @pytest.mark.parametrize("shares", [[], [(0.6, MinerStrategy())], [(-0.5, MinerStrategy()), (1.5, MinerStrategy())]])
    def test_rejects_bad_shares(self, mixed_params, shares):
        with pytest.raises(DomainError):
            aggregate_miners_experiment(shares, mixed_params, 10)
