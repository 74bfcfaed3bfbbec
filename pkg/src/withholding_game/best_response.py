"""Closed-form best-response correspondences.

Both correspondences are set valued on knife edges, so they return a
``StrategyBox``: a product of two closed intervals, one per withholding
(or betting) probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    ABS_TOL,
    GameParameters,
    MinerStrategy,
    UserStrategy,
    miner_thresholds,
    user_thresholds,
)
from .errors import DomainError, UnsupportedInput

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise DomainError(f"interval [{self.lo}, {self.hi}] is not ordered inside [0, 1]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = ABS_TOL) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def linspace(self, k: int) -> np.ndarray:
        if self.is_point:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, k)


@dataclass(frozen=True)
class StrategyBox:
    """``d_interval x n_interval``; every point is inside the strategy simplex."""

    d_interval: Interval
    n_interval: Interval

    def __post_init__(self):
        if self.d_interval.hi + self.n_interval.hi > 1.0 + ABS_TOL:
            raise DomainError("strategy box leaves the simplex")

    @classmethod
    def point(cls, d: float, n: float) -> "StrategyBox":
        return cls(Interval.point(d), Interval.point(n))

    @property
    def is_point(self) -> bool:
        return self.d_interval.is_point and self.n_interval.is_point

    def contains(self, d: float, n: float, tol: float = ABS_TOL) -> bool:
        return self.d_interval.contains(d, tol) and self.n_interval.contains(n, tol)

    def sample(self, k: int = 5) -> Iterator[tuple[float, float]]:
        """Yield ``k`` evenly spaced values along each non-degenerate axis."""
        for d in self.d_interval.linspace(k):
            for n in self.n_interval.linspace(k):
                yield float(d), float(n)

    def nearest(self, d: float, n: float) -> tuple[float, float]:
        return (float(np.clip(d, self.d_interval.lo, self.d_interval.hi)),
                float(np.clip(n, self.n_interval.lo, self.n_interval.hi)))

    def miner_strategies(self, k: int = 5) -> list[MinerStrategy]:
        return [MinerStrategy(d, n) for d, n in self.sample(k)]

    def user_strategies(self, k: int = 5) -> list[UserStrategy]:
        return [UserStrategy(d, n) for d, n in self.sample(k)]


FULL_D = StrategyBox(Interval(0.0, 1.0), Interval.point(0.0))
FULL_N = StrategyBox(Interval.point(0.0), Interval(0.0, 1.0))


def user_best_response(P_d: float, params: GameParameters,
                       tol: float = BOUNDARY_TOL) -> StrategyBox:
    """All user strategies maximising the expected bet payoff at a published ``P_d``."""
    if not 0.0 <= P_d <= 1.0:
        raise DomainError(f"P_d must lie in [0, 1], got {P_d}")
    th = user_thresholds(params.p, params.epsilon)
    if abs(P_d - th.P_low) <= tol:
        return FULL_N
    if abs(P_d - th.P_high) <= tol:
        return FULL_D
    if P_d < th.P_low:
        return StrategyBox.point(0.0, 1.0)
    if P_d > th.P_high:
        return StrategyBox.point(1.0, 0.0)
    return StrategyBox.point(0.0, 0.0)


def miner_best_response(lambda_d: float, params: GameParameters,
                        lambda_n: float = 0.0,
                        tol: float = BOUNDARY_TOL) -> StrategyBox:
    """All miner strategies maximising the miner payoff against bets on ``D`` only.

    Requires strictly positive forcing costs.  Against users who also bet on
    the complement there is no closed form here; ``oracle.grid_best_response``
    handles that case.
    """
    if lambda_n > 0.0:
        raise UnsupportedInput(
            "closed-form miner best response needs lambda_n == 0; use the grid oracle")
    if params.C_d <= 0.0 or params.C_n <= 0.0:
        raise DomainError("miner best response requires C_d > 0 and C_n > 0")
    th = miner_thresholds(params, lambda_d)
    if abs(th.Lambda - th.Lambda_low) <= tol:
        return FULL_D
    if abs(th.Lambda - th.Lambda_high) <= tol:
        return FULL_N
    if th.Lambda < th.Lambda_low:
        return StrategyBox.point(1.0, 0.0)
    if th.Lambda > th.Lambda_high:
        return StrategyBox.point(0.0, 1.0)
    return StrategyBox.point(0.0, 0.0)
