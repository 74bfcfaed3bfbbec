"""Brute-force verification of best responses and equilibria on strategy grids.

Nothing here uses the closed-form thresholds of ``best_response`` or
``equilibrium`` except as extra probe points for ``verify_equilibrium``;
every decision comes from evaluating the payoff functions, either pointwise
or through the 3x3 pure-profile payoff matrices they induce.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import (
    GameParameters,
    MinerStrategy,
    UserStrategy,
    betting_odds,
    canonical_strategy_for_target,
    user_thresholds,
)
from .payoffs import miner_payoff_values, user_payoff_values

ARGMAX_TOL = 1e-12
DEFAULT_GRID_N = 50
# Pair-matrix elements evaluated per chunk in find_epsilon_nash.  Chunk
# boundaries depend only on this and N, never on the worker count.
_CHUNK_ELEMENTS = 1 << 15


def default_tolerance(params: GameParameters) -> float:
    return params.payoff_scale * 1e-8


@dataclass(frozen=True)
class StrategyGrid:
    """All ``(i/N, j/N)`` with ``i + j <= N``, ordered lexicographically."""

    resolution: int

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 1:
            raise ValueError(f"grid resolution must be a positive integer, got {self.resolution}")

    @cached_property
    def points(self) -> np.ndarray:
        n = self.resolution
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        mask = (i + j) <= n
        return np.column_stack([i[mask], j[mask]]) / n

    def __len__(self):
        n = self.resolution
        return (n + 1) * (n + 2) // 2


@dataclass(frozen=True)
class VerificationReport:
    candidate: tuple[MinerStrategy, UserStrategy]
    miner_gain: float
    user_gain: float
    tol: float

    @property
    def max_gain(self) -> float:
        return max(self.miner_gain, self.user_gain)

    @property
    def passes(self) -> bool:
        return self.miner_gain <= self.tol and self.user_gain <= self.tol


def _argmax_rows(points: np.ndarray, values: np.ndarray) -> np.ndarray:
    best = values.max()
    keep = values >= best - ARGMAX_TOL * max(1.0, abs(best))
    chosen = points[keep]
    order = np.lexsort((chosen[:, 1], chosen[:, 0]))
    return chosen[order]


def grid_best_response(side: str, opponent, params: GameParameters,
                       N: int = DEFAULT_GRID_N) -> list:
    """Grid points maximising ``side``'s payoff against a fixed opponent.

    Returns ``MinerStrategy`` or ``UserStrategy`` objects in lexicographic
    order of their coordinates.
    """
    if N < 2:
        raise ValueError("grid resolution must be at least 2")
    pts = StrategyGrid(N).points
    if side == "user":
        vals = user_payoff_values(pts[:, 0], pts[:, 1],
                                  opponent.omega_d, opponent.omega_n, params)
        return [UserStrategy(*row) for row in _argmax_rows(pts, vals)]
    if side == "miner":
        vals = miner_payoff_values(opponent.lambda_d, opponent.lambda_n,
                                   pts[:, 0], pts[:, 1], params)
        return [MinerStrategy(*row) for row in _argmax_rows(pts, vals)]
    raise ValueError(f"side must be 'miner' or 'user', got {side!r}")


_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def pure_payoff_matrices(params: GameParameters) -> tuple[np.ndarray, np.ndarray]:
    """``(U, M)`` with ``U[i, j]`` / ``M[i, j]`` the user / miner payoff when the
    user plays pure ``i`` and the miner pure ``j`` (order: A/H, D, not-D).

    Expected payoffs of mixed strategies are bilinear in the two mixing
    vectors, so these nine evaluations determine every pair payoff.
    """
    ld, ln = _VERTICES[:, None, 0], _VERTICES[:, None, 1]
    wd, wn = _VERTICES[None, :, 0], _VERTICES[None, :, 1]
    return (np.asarray(user_payoff_values(ld, ln, wd, wn, params), dtype=float),
            np.asarray(miner_payoff_values(ld, ln, wd, wn, params), dtype=float))


def _mixing(points: np.ndarray) -> np.ndarray:
    """Rows ``(1 - d - n, d, n)`` for grid coordinates ``(d, n)``."""
    return np.column_stack([1.0 - points[:, 0] - points[:, 1], points[:, 0], points[:, 1]])


def find_epsilon_nash(params: GameParameters, N: int = DEFAULT_GRID_N,
                      tol: float | None = None, workers: int = 1) -> list[VerificationReport]:
    """Every grid strategy pair whose unilateral improvement is at most ``tol``.

    Payoffs are affine in each player's own mixed strategy, so the best
    deviation over the grid is attained at a pure strategy (always a grid
    point); the deviation value is therefore read off the three vertices.
    With ``tol=None`` the threshold adapts: it is the smallest achievable
    gain on the grid plus ``default_tolerance``, so the closest cluster is
    always returned even when the exact equilibrium is off grid.
    Results are sorted by max gain, ties broken lexicographically, and do
    not depend on ``workers``.
    """
    if N < 2:
        raise ValueError("grid resolution must be at least 2")
    pts = StrategyGrid(N).points
    mix = _mixing(pts)
    slack = default_tolerance(params)
    U, M = pure_payoff_matrices(params)
    # rows index user grid points, columns miner grid points
    user_vs_pure = mix @ U.T       # user payoff of user pure j vs miner point i: [i, j]
    miner_vs_pure = mix @ M        # miner payoff of miner pure j vs user point i: [i, j]
    user_best = user_vs_pure.max(axis=1)
    miner_best = miner_vs_pure.max(axis=1)
    U_left = mix @ U               # user point x pure miner
    M_left = mix @ M

    step = max(1, _CHUNK_ELEMENTS // len(pts))
    bounds = [(lo, min(lo + step, len(pts))) for lo in range(0, len(pts), step)]

    def work(b):
        lo, hi = b
        cols = mix[lo:hi].T
        ug = U_left @ cols
        np.subtract(user_best[None, lo:hi], ug, out=ug)
        mg = M_left @ cols
        np.subtract(miner_best[:, None], mg, out=mg)
        gain = np.maximum(ug, mg)
        floor = float(gain.min())
        cut = (floor + slack) if tol is None else tol
        ui, mi = np.nonzero(gain <= cut)
        return floor, ui, mi + lo, ug[ui, mi], mg[ui, mi]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]

    threshold = tol if tol is not None else min(p[0] for p in parts) + slack
    ui = np.concatenate([p[1] for p in parts])
    mi = np.concatenate([p[2] for p in parts])
    ug = np.maximum(np.concatenate([p[3] for p in parts]), 0.0)
    mg = np.maximum(np.concatenate([p[4] for p in parts]), 0.0)
    gain = np.maximum(ug, mg)
    keep = gain <= threshold
    ui, mi, ug, mg, gain = ui[keep], mi[keep], ug[keep], mg[keep], gain[keep]
    order = np.lexsort((pts[ui, 1], pts[ui, 0], pts[mi, 1], pts[mi, 0], gain))
    return [
        VerificationReport(
            candidate=(MinerStrategy(*pts[mi[k]]), UserStrategy(*pts[ui[k]])),
            miner_gain=float(mg[k]), user_gain=float(ug[k]), tol=float(threshold))
        for k in order
    ]


def _critical_miner_points(params: GameParameters) -> list[tuple[float, float]]:
    th = user_thresholds(params.p, params.epsilon)
    out = [(params.epsilon / (1.0 + params.epsilon), 0.0)]
    for target in (th.P_low, th.P_high):
        s = canonical_strategy_for_target(target, params.p)
        out.append((s.omega_d, s.omega_n))
    return out


def _critical_user_points(params: GameParameters) -> list[tuple[float, float]]:
    capacity = params.b_d * (betting_odds(params.p, params.epsilon).beta_d + 1.0)
    out = []
    if capacity > 0:
        for level in (params.R_w - params.C_d / (1.0 - params.p),
                      params.R_w + params.C_n / params.p):
            lam = level / capacity
            if 0.0 <= lam <= 1.0:
                out.append((lam, 0.0))
    return out


def verify_equilibrium(candidate: tuple[MinerStrategy, UserStrategy],
                       params: GameParameters, N: int = DEFAULT_GRID_N,
                       tol: float | None = None) -> VerificationReport:
    """Largest unilateral improvement available to either player at ``candidate``.

    Deviations range over the ``N``-grid plus the candidate itself and the
    points where the opponent's incentives flip, so both gains are >= 0.
    """
    miner, user = candidate
    if tol is None:
        tol = default_tolerance(params)
    grid = StrategyGrid(N).points

    m_pts = np.vstack([grid, [[miner.omega_d, miner.omega_n]], _critical_miner_points(params)])
    m_vals = miner_payoff_values(user.lambda_d, user.lambda_n, m_pts[:, 0], m_pts[:, 1], params)
    u_extra = [[user.lambda_d, user.lambda_n]] + _critical_user_points(params)
    u_pts = np.vstack([grid, u_extra])
    u_vals = user_payoff_values(u_pts[:, 0], u_pts[:, 1], miner.omega_d, miner.omega_n, params)

    here_m = miner_payoff_values(user.lambda_d, user.lambda_n, miner.omega_d, miner.omega_n, params)
    here_u = user_payoff_values(user.lambda_d, user.lambda_n, miner.omega_d, miner.omega_n, params)
    return VerificationReport(
        candidate=(miner, user),
        miner_gain=float(m_vals.max() - here_m),
        user_gain=float(u_vals.max() - here_u),
        tol=float(tol),
    )


def odds_swap_discrepancy(p: float, epsilon: float) -> float:
    """``|beta_d(p) - beta_n(1-p)| + |beta_n(p) - beta_d(1-p)|``; zero up to rounding.

    Relabelling ``D`` and its complement swaps the two odds factors.  The rest
    of the game is not symmetric (the miner's reward is attached to ``D``).
    """
    a = betting_odds(p, epsilon)
    b = betting_odds(1.0 - p, epsilon)
    return abs(a.beta_d - b.beta_n) + abs(a.beta_n - b.beta_d)
