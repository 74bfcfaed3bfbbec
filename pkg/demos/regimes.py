"""Walk one parameter through all five equilibrium regimes.

Holding costs and odds fixed, raise the reward the miner gets when D
happens.  Small rewards never justify withholding; large rewards with small
bets make the miner force D outright; in between, bettors and miner settle
into a mixed equilibrium that caps how far P_d can drift from p.
"""

from withholding_game import GameParameters, betting_odds, equilibrium_bound, solve_equilibrium

base = dict(p=0.4, epsilon=0.05, b_d=6.0, C_d=1.2, C_n=0.6)
print(f"{'R_w':>6}  {'regime':<13} miner omega_d            user lambda_d")
for R_w in (1.0, 2.0, 5.0, 10.0, 16.0, 30.0):
    eq = solve_equilibrium(GameParameters(R_w=R_w, **base))
    m, u = eq.miner_box.d_interval, eq.user_box.d_interval
    miner = f"{m.lo:.4f}" if m.is_point else f"[{m.lo:.4f}, {m.hi:.4f}]"
    print(f"{R_w:6.1f}  {eq.regime.value:<13} {miner:<24} {u.lo:.4f}")

# the two knife edges, hit exactly
edge_low = base["C_d"] / (1 - base["p"])
edge_high = edge_low + base["b_d"] * (betting_odds(base["p"], base["epsilon"]).beta_d + 1)
for R_w in (edge_low, edge_high):
    eq = solve_equilibrium(GameParameters(R_w=R_w, **base))
    print(f"R_w = {R_w:.4f} is a boundary: {eq.regime.value}, "
          f"omega_d anywhere in [{eq.miner_box.d_interval.lo:.4f}, {eq.miner_box.d_interval.hi:.4f}]")

b = equilibrium_bound(0.5, 0.1)
print(f"\nwith bets large enough, a 50-50 event happens at most {b.P_d_max:.2%} of the time (epsilon = 0.1)")
