"""Simulate block production with withholding, betting and settlement.

Each published block comes from a miner who is honest or re-mines until the
outcome it wants appears; a bettor stakes on the outcome and is settled at
the house odds.  The sample means should sit on the analytic payoffs.
"""

from withholding_game import (
    GameParameters,
    MinerStrategy,
    SimulationConfig,
    UserStrategy,
    aggregate_miners_experiment,
    miner_payoff,
    simulate,
    user_payoff,
)

params = GameParameters(p=0.4, epsilon=0.05, R_w=10.0, b_d=6.0, C_d=1.2, C_n=0.6)
cases = [
    ("honest miner, bettor on D", MinerStrategy(0, 0), UserStrategy(1, 0)),
    ("mixed equilibrium", MinerStrategy(0.05 / 1.05, 0), UserStrategy(8 / 14, 0)),
    ("always force D", MinerStrategy(1, 0), UserStrategy(1, 0)),
]
for label, miner, user in cases:
    r = simulate(SimulationConfig(params, miner, user, 500_000, seed=1))
    print(f"{label}:")
    print(f"  P_d   {r.empirical_P_d:.4f} +- {r.empirical_P_d_stderr:.4f}")
    print(f"  user  {r.user_payoff_mean:+.4f} +- {r.user_payoff_stderr:.4f}  (analytic {user_payoff(user, miner, params):+.4f})")
    print(f"  miner {r.miner_payoff_mean:+.4f} +- {r.miner_payoff_stderr:.4f}  (analytic {miner_payoff(user, miner, params):+.4f})")

# many miners behave like one whose strategy is the share-weighted average
report, single = aggregate_miners_experiment(
    [(0.5, MinerStrategy(0, 0)), (0.5, MinerStrategy(1, 0))], params, 500_000, seed=2)
print(f"\nhalf honest, half forcing D: P_d = {report.empirical_P_d:.4f}, "
      f"same as one miner with omega_d = {single.omega_d}")

# costs from a per-attempt mining price instead of fixed forcing costs
r = simulate(SimulationConfig(params, MinerStrategy(0.3, 0.1), UserStrategy(), 200_000, seed=3,
                              cost_per_attempt=0.5))
print(f"re-mining at 0.5 per attempt: {r.attempts - r.n_blocks} discarded blocks cost {r.realized_withhold_cost:.1f}")
