"""Regime classification and the closed-form Nash equilibrium sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .best_response import BOUNDARY_TOL, Interval, StrategyBox
from .core import GameParameters, MinerStrategy, UserStrategy, check_p_epsilon
from .errors import DomainError


class Regime(str, enum.Enum):
    SMALL_RW = "SmallRw"
    BOUNDARY_LOW = "BoundaryLow"
    MIXED = "Mixed"
    BOUNDARY_HIGH = "BoundaryHigh"
    SMALL_BD = "SmallBd"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EquilibriumSet:
    """Every Nash equilibrium is a pair from ``miner_box x user_box``.

    ``coupling`` is True when the whole Cartesian product consists of
    equilibria, which holds in all five regimes.
    """

    regime: Regime
    miner_box: StrategyBox
    user_box: StrategyBox
    coupling: bool = True

    @property
    def is_unique(self) -> bool:
        return self.miner_box.is_point and self.user_box.is_point

    def points(self, k: int = 5) -> Iterator[tuple[MinerStrategy, UserStrategy]]:
        for miner in self.miner_box.miner_strategies(k):
            for user in self.user_box.user_strategies(k):
                yield miner, user


@dataclass(frozen=True)
class EquilibriumBound:
    omega_d_max: float
    P_d_max: float
    deviation: float


def _require_positive_game(params: GameParameters):
    problems = []
    if params.C_d <= 0.0:
        problems.append("C_d must be > 0 for equilibrium analysis")
    if params.C_n <= 0.0:
        problems.append("C_n must be > 0 for equilibrium analysis")
    if params.b_d <= 0.0:
        problems.append("b_d must be > 0 for equilibrium analysis")
    if params.b_n <= 0.0:
        problems.append("b_n must be > 0 for equilibrium analysis")
    if problems:
        raise DomainError(problems)


def classify_regime(params: GameParameters, tol: float = BOUNDARY_TOL) -> Regime:
    _require_positive_game(params)
    gap = params.forcing_gap
    capacity = params.bet_capacity
    if abs(gap) <= tol:
        return Regime.BOUNDARY_LOW
    if gap < 0.0:
        return Regime.SMALL_RW
    if abs(capacity - gap) <= tol:
        return Regime.BOUNDARY_HIGH
    if capacity > gap:
        return Regime.MIXED
    return Regime.SMALL_BD


def solve_equilibrium(params: GameParameters, tol: float = BOUNDARY_TOL) -> EquilibriumSet:
    regime = classify_regime(params, tol)
    omega_star = params.epsilon / (1.0 + params.epsilon)
    zero = Interval.point(0.0)
    if regime is Regime.SMALL_RW:
        miner, user = StrategyBox.point(0.0, 0.0), StrategyBox.point(0.0, 0.0)
    elif regime is Regime.SMALL_BD:
        miner, user = StrategyBox.point(1.0, 0.0), StrategyBox.point(1.0, 0.0)
    elif regime is Regime.MIXED:
        lambda_star = params.forcing_gap / params.bet_capacity
        miner = StrategyBox.point(omega_star, 0.0)
        user = StrategyBox.point(lambda_star, 0.0)
    elif regime is Regime.BOUNDARY_LOW:
        miner = StrategyBox(Interval(0.0, omega_star), zero)
        user = StrategyBox.point(0.0, 0.0)
    else:
        miner = StrategyBox(Interval(omega_star, 1.0), zero)
        user = StrategyBox.point(1.0, 0.0)
    return EquilibriumSet(regime, miner, user)


def equilibrium_bound(p: float, epsilon: float) -> EquilibriumBound:
    """Worst-case equilibrium withholding and skew once the bet cap is large enough."""
    check_p_epsilon(p, epsilon)
    return EquilibriumBound(
        omega_d_max=epsilon / (1.0 + epsilon),
        P_d_max=(p + epsilon) / (1.0 + epsilon),
        deviation=epsilon * (1.0 - p) / (1.0 + epsilon),
    )
