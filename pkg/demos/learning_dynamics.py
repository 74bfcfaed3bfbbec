"""Let miner and bettor learn by nudging toward their best responses.

Starting from an honest miner and an abstaining bettor, each round both move
a fraction of the way toward what would be optimal against the other.  The
path circles in on the mixed equilibrium.
"""

from withholding_game import GameParameters, best_response_dynamics

params = GameParameters(p=0.4, epsilon=0.05, R_w=10.0, b_d=6.0, C_d=1.2, C_n=0.6)
trace = best_response_dynamics(params, damping=0.1)
for k in list(range(0, trace.iterations, 10)) + [trace.iterations]:
    m, u = trace.iterates[k]
    print(f"round {k:3d}: omega_d = {m.omega_d:.4f}  omega_n = {m.omega_n:.4f}  lambda_d = {u.lambda_d:.4f}")
print(f"converged = {trace.converged}; target omega_d = {0.05 / 1.05:.4f}, lambda_d = {8 / 14:.4f}")
