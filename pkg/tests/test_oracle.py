import numpy as np
import pytest

from tests_support import sweep
from withholding_game import (
    MinerStrategy,
    UserStrategy,
    find_epsilon_nash,
    grid_best_response,
    solve_equilibrium,
    verify_equilibrium,
)
from withholding_game.oracle import StrategyGrid, odds_swap_discrepancy, pure_payoff_matrices
from withholding_game.payoffs import miner_payoff_values, user_payoff_values


@pytest.mark.parametrize("n", [1, 2, 7, 50])
def test_grid_shape(n):
    grid = StrategyGrid(n)
    pts = grid.points
    assert len(pts) == len(grid) == (n + 1) * (n + 2) // 2
    as_set = {tuple(x) for x in pts}
    assert {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)} <= as_set
    assert np.all(pts.sum(axis=1) <= 1 + 1e-15)
    assert [tuple(x) for x in pts] == sorted(as_set)


def test_grid_rejects_bad_resolution():
    with pytest.raises(ValueError):
        StrategyGrid(0)


class TestGridBestResponse:
    def test_user_vs_honest(self, mixed_params):
        assert grid_best_response("user", MinerStrategy(0, 0), mixed_params, N=100) == [UserStrategy(0, 0)]

    def test_miner_vs_abstainer(self, small_rw_params):
        assert grid_best_response("miner", UserStrategy(0, 0), small_rw_params, N=100) == [MinerStrategy(0, 0)]

    def test_user_vs_forcer(self, mixed_params):
        assert grid_best_response("user", MinerStrategy(1, 0), mixed_params, N=2) == [UserStrategy(1, 0)]

    def test_tie_order(self, mixed_params):
        # on the miner's knife edge every point of [0,1]x{0} is optimal
        best = grid_best_response("miner", UserStrategy(4 / 7, 0), mixed_params, N=10)
        assert [m.omega_d for m in best] == pytest.approx(np.linspace(0, 1, 11))
        assert all(m.omega_n == 0 for m in best)

    def test_bad_side(self, mixed_params):
        with pytest.raises(ValueError):
            grid_best_response("referee", MinerStrategy(), mixed_params)


def test_pure_matrices_match_payoffs(mixed_params):
    U, M = pure_payoff_matrices(mixed_params)
    corners = [(0, 0), (1, 0), (0, 1)]
    for i, (ld, ln) in enumerate(corners):
        for j, (wd, wn) in enumerate(corners):
            assert U[i, j] == user_payoff_values(ld, ln, wd, wn, mixed_params)
            assert M[i, j] == miner_payoff_values(ld, ln, wd, wn, mixed_params)


def test_bilinear_reduction(mixed_params):
    U, M = pure_payoff_matrices(mixed_params)
    rng = np.random.default_rng(40)
    for _ in range(200):
        x, y = rng.dirichlet([1, 1, 1], 2)
        assert x @ U @ y == pytest.approx(user_payoff_values(x[1], x[2], y[1], y[2], mixed_params), abs=1e-12)
        assert x @ M @ y == pytest.approx(miner_payoff_values(x[1], x[2], y[1], y[2], mixed_params), abs=1e-12)


class TestFindEpsilonNash:
    def test_small_rw(self, small_rw_params):
        found = find_epsilon_nash(small_rw_params, N=50)
        assert found
        for r in found:
            m, u = r.candidate
            assert max(m.omega_d, m.omega_n, u.lambda_d, u.lambda_n) <= 1 / 50

    def test_small_bd(self, small_bd_params):
        found = find_epsilon_nash(small_bd_params, N=50)
        assert [r.candidate for r in found] == [(MinerStrategy(1, 0), UserStrategy(1, 0))]

    def test_mixed_cluster(self, mixed_params):
        found = find_epsilon_nash(mixed_params, N=210)
        for r in found:
            m, u = r.candidate
            assert abs(m.omega_d - 0.0476190) <= 2 / 210 and m.omega_n <= 2 / 210
            assert abs(u.lambda_d - 0.5714286) <= 2 / 210 and u.lambda_n <= 2 / 210

    def test_sorted_and_nonnegative(self, mixed_params):
        found = find_epsilon_nash(mixed_params, N=40, tol=0.5)
        gains = [r.max_gain for r in found]
        assert gains == sorted(gains)
        assert min(min(r.miner_gain, r.user_gain) for r in found) >= -1e-12

    def test_workers_do_not_change_result(self, mixed_params):
        a = find_epsilon_nash(mixed_params, N=80, tol=0.05, workers=1)
        b = find_epsilon_nash(mixed_params, N=80, tol=0.05, workers=4)
        assert a == b and len(a) > 1

    def test_refinement(self, mixed_params):
        target = np.array([0.05 / 1.05, 8 / 14])
        for n in (30, 60, 120, 240):
            found = find_epsilon_nash(mixed_params, N=n)
            centroid = np.mean([[r.candidate[0].omega_d, r.candidate[1].lambda_d] for r in found], axis=0)
            assert np.linalg.norm(centroid - target) <= 1.5 / n


class TestVerify:
    def test_mixed_passes(self, mixed_params):
        (cand,) = list(solve_equilibrium(mixed_params).points())
        assert verify_equilibrium(cand, mixed_params).passes

    def test_forcing_invites_bets(self, small_rw_params):
        r = verify_equilibrium((MinerStrategy(1, 0), UserStrategy(0, 0)), small_rw_params)
        assert not r.passes and r.user_gain > 0

    def test_honest_exploitable_with_small_bets(self, small_bd_params):
        r = verify_equilibrium((MinerStrategy(0, 0), UserStrategy(0, 0)), small_bd_params)
        assert not r.passes and r.miner_gain > 0

    def test_closed_form_is_exact(self):
        for params in sweep(300, seed=41):
            for cand in solve_equilibrium(params).points(3):
                r = verify_equilibrium(cand, params)
                assert -1e-12 <= min(r.miner_gain, r.user_gain)
                assert r.max_gain <= 1e-9


def test_odds_swap():
    rng = np.random.default_rng(42)
    for p, eps in zip(rng.uniform(0.01, 0.99, 2000), 10 ** rng.uniform(-3, 0.5, 2000)):
        assert odds_swap_discrepancy(p, eps) <= 1e-12
