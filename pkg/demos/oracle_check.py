"""Check the closed-form equilibrium against brute force.

The oracle knows nothing about thresholds: it evaluates payoffs on a grid of
mixed strategies and reports every pair from which neither player can gain.
"""

import time

from withholding_game import GameParameters, find_epsilon_nash, solve_equilibrium, verify_equilibrium

params = GameParameters(p=0.4, epsilon=0.05, R_w=10.0, b_d=6.0, C_d=1.2, C_n=0.6)
(candidate,) = list(solve_equilibrium(params).points())
report = verify_equilibrium(candidate, params)
print(f"closed form: omega_d = {candidate[0].omega_d:.6f}, lambda_d = {candidate[1].lambda_d:.6f}")
print(f"  best miner deviation gains {report.miner_gain:.1e}, best user deviation {report.user_gain:.1e}")

for n in (30, 60, 120):
    start = time.perf_counter()
    found = find_epsilon_nash(params, N=n)
    best = found[0]
    m, u = best.candidate
    print(f"grid 1/{n:<4} {len(found):3d} near-equilibria, best at omega_d = {m.omega_d:.4f}, "
          f"lambda_d = {u.lambda_d:.4f} (gain {best.max_gain:.2e}, {time.perf_counter() - start:.2f}s)")
