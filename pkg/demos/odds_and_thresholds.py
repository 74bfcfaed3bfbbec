"""How the house edge shapes the odds and when a bettor should bet at all.

A bookmaker offering bets on an in-game event D that happens with
probability p tilts the odds by a house edge epsilon.  Against an honest
miner every bet then loses money on average; a bet only pays once a
withholding miner skews the published distribution past a threshold.
"""

from withholding_game import (
    GameParameters,
    MinerStrategy,
    UserStrategy,
    betting_odds,
    user_payoff,
    user_thresholds,
)

p, eps = 0.4, 0.05
odds = betting_odds(p, eps)
th = user_thresholds(p, eps)
print(f"event probability p = {p}, house edge epsilon = {eps}")
print(f"  a winning bet on D pays {odds.beta_d:.4f} per unit staked, on not-D {odds.beta_n:.4f}")
print(f"  betting on D pays off only if P_d > {th.P_high:.4f}")
print(f"  betting on not-D pays off only if P_d < {th.P_low:.4f}")

params = GameParameters(p=p, epsilon=eps, R_w=10.0, b_d=6.0)
print("\nexpected payoff of always betting 6 on D, by how often the miner forces D:")
for omega_d in (0.0, 0.02, 0.0476, 0.1, 0.5, 1.0):
    value = user_payoff(UserStrategy(1.0, 0.0), MinerStrategy(omega_d, 0.0), params)
    print(f"  omega_d = {omega_d:<6}  E[U] = {value:+.4f}")
print("\nthe break-even sits at omega_d = epsilon/(1+epsilon) = "
      f"{eps / (1 + eps):.4f}, where P_d hits the upper threshold")
