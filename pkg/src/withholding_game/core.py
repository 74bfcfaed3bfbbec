"""Parameters, strategies and the derived scalar quantities of the betting game.

Event ``D`` occurs with natural probability ``p`` in an honestly mined block.
The miner mixes over honest mining ``H`` and withholding to force ``D``
(``W_d``) or its complement (``W_n``); the user mixes over abstaining ``A``
and betting the cap on either outcome (``B_d``, ``B_n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Mapping

import numpy as np

from .errors import DomainError

ABS_TOL = 1e-12


def is_close(a: float, b: float, tol: float = ABS_TOL) -> bool:
    """Absolute comparison at ``tol``, relative once magnitudes exceed one."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def sign(x: float, tol: float = ABS_TOL) -> int:
    """Three-valued sign with a dead band of width ``tol`` around zero."""
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def _finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


@dataclass(frozen=True)
class GameParameters:
    """Scalar inputs of the betting game.

    ``R_w`` is the extra reward the miner receives when ``D`` occurs, so the
    conditional block rewards are ``R_0 + R_w`` and ``R_0``.  ``b_n`` defaults
    to ``b_d``.
    """

    p: float
    epsilon: float
    R_w: float
    b_d: float = 0.0
    b_n: float | None = None
    R_0: float = 0.0
    C_d: float = 0.0
    C_n: float = 0.0

    def __post_init__(self):
        if self.b_n is None:
            object.__setattr__(self, "b_n", self.b_d)
        problems = _parameter_violations(self)
        if problems:
            raise DomainError(problems)
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))

    def replace(self, **changes) -> "GameParameters":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return GameParameters(**values)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def forcing_gap(self) -> float:
        """``R_w - C_d/(1-p)``: what forcing ``D`` is worth before any bets."""
        return self.R_w - self.C_d / (1.0 - self.p)

    @property
    def bet_capacity(self) -> float:
        """``b_d (beta_d + 1)``: the largest stake-weighted pressure on the miner."""
        return self.b_d * (betting_odds(self.p, self.epsilon).beta_d + 1.0)

    @property
    def payoff_scale(self) -> float:
        odds = betting_odds(self.p, self.epsilon)
        return max(self.R_w, self.b_d * odds.beta_d, self.b_n * odds.beta_n,
                   self.C_d, self.C_n, 1.0)


def _parameter_violations(params) -> list[str]:
    out = []
    for name in ("p", "epsilon", "R_w", "b_d", "b_n", "R_0", "C_d", "C_n"):
        if not _finite(getattr(params, name)):
            out.append(f"{name} must be a finite real, got {getattr(params, name)!r}")
    if out:
        return out
    if not 0.0 < params.p < 1.0:
        out.append(f"p must lie in (0, 1), got {params.p}")
    if params.epsilon <= 0.0:
        out.append(f"epsilon must be > 0, got {params.epsilon}")
    if params.R_w <= 0.0:
        out.append(f"R_w must be > 0, got {params.R_w}")
    for name in ("b_d", "b_n", "C_d", "C_n"):
        if getattr(params, name) < 0.0:
            out.append(f"{name} must be >= 0, got {getattr(params, name)}")
    return out


def validate_parameters(raw: GameParameters | Mapping) -> GameParameters:
    """Return validated parameters, raising ``DomainError`` listing every violation.

    Accepts an existing ``GameParameters`` (returned as is) or a mapping of
    field names; unknown keys are reported as violations too.
    """
    if isinstance(raw, GameParameters):
        return raw
    known = {f.name for f in fields(GameParameters)}
    unknown = sorted(set(raw) - known)
    missing = sorted({"p", "epsilon", "R_w"} - set(raw))
    problems = [f"unknown parameter {k!r}" for k in unknown]
    problems += [f"missing required parameter {k!r}" for k in missing]
    if problems:
        raise DomainError(problems)
    return GameParameters(**raw)


def _check_simplex(kind: str, a: float, b: float, names: tuple[str, str]):
    problems = []
    for name, value in zip(names, (a, b)):
        if not _finite(value) or not -ABS_TOL <= value <= 1.0 + ABS_TOL:
            problems.append(f"{kind} {name} must lie in [0, 1], got {value!r}")
    if not problems and a + b > 1.0 + ABS_TOL:
        problems.append(f"{kind} probabilities must sum to <= 1, got {a + b!r}")
    if problems:
        raise DomainError(problems)


@dataclass(frozen=True)
class MinerStrategy:
    """Probabilities of ``W_d`` and ``W_n``; honest mining takes the rest."""

    omega_d: float = 0.0
    omega_n: float = 0.0

    def __post_init__(self):
        _check_simplex("miner", self.omega_d, self.omega_n, ("omega_d", "omega_n"))
        object.__setattr__(self, "omega_d", float(self.omega_d))
        object.__setattr__(self, "omega_n", float(self.omega_n))

    @property
    def honest(self) -> float:
        return max(0.0, 1.0 - self.omega_d - self.omega_n)

    def as_array(self) -> np.ndarray:
        return np.array([self.omega_d, self.omega_n])


@dataclass(frozen=True)
class UserStrategy:
    """Probabilities of betting the cap on ``D`` or on its complement."""

    lambda_d: float = 0.0
    lambda_n: float = 0.0

    def __post_init__(self):
        _check_simplex("user", self.lambda_d, self.lambda_n, ("lambda_d", "lambda_n"))
        object.__setattr__(self, "lambda_d", float(self.lambda_d))
        object.__setattr__(self, "lambda_n", float(self.lambda_n))

    @property
    def abstain(self) -> float:
        return max(0.0, 1.0 - self.lambda_d - self.lambda_n)

    def as_array(self) -> np.ndarray:
        return np.array([self.lambda_d, self.lambda_n])


HONEST = MinerStrategy(0.0, 0.0)
FORCE_D = MinerStrategy(1.0, 0.0)
FORCE_N = MinerStrategy(0.0, 1.0)
ABSTAIN = UserStrategy(0.0, 0.0)
BET_D = UserStrategy(1.0, 0.0)
BET_N = UserStrategy(0.0, 1.0)


@dataclass(frozen=True)
class Odds:
    """Payout per unit stake on a winning bet on ``D`` / on its complement."""

    beta_d: float
    beta_n: float


@dataclass(frozen=True)
class UserThresholds:
    """Published ``P_d`` below ``P_low`` makes betting on not-D profitable,
    above ``P_high`` betting on D."""

    P_low: float
    P_high: float


@dataclass(frozen=True)
class MinerThresholds:
    Lambda: float
    Lambda_low: float
    Lambda_high: float


def check_p_epsilon(p, epsilon):
    problems = []
    if not (_finite(p) and 0.0 < p < 1.0):
        problems.append(f"p must lie in (0, 1), got {p!r}")
    if not (_finite(epsilon) and epsilon > 0.0):
        problems.append(f"epsilon must be > 0, got {epsilon!r}")
    if problems:
        raise DomainError(problems)


def betting_odds(p: float, epsilon: float) -> Odds:
    """Odds that leave an honest miner an expected edge of ``epsilon * beta * b``."""
    check_p_epsilon(p, epsilon)
    return Odds(beta_d=(1.0 - p) / (p + epsilon), beta_n=p / (1.0 - p + epsilon))


def published_distribution(strategy: MinerStrategy, p: float) -> tuple[float, float]:
    """``(P_d, P_n)`` of published blocks under a (possibly withholding) miner."""
    P_d = float(published_p_d(strategy.omega_d, strategy.omega_n, p))
    return P_d, 1.0 - P_d


def published_p_d(omega_d, omega_n, p):
    """Array-friendly ``P_d``; every payoff evaluation goes through here."""
    P_d = omega_d + (1.0 - omega_d - omega_n) * p
    return np.clip(P_d, 0.0, 1.0)


def user_thresholds(p: float, epsilon: float) -> UserThresholds:
    check_p_epsilon(p, epsilon)
    return UserThresholds(P_low=p / (1.0 + epsilon), P_high=(p + epsilon) / (1.0 + epsilon))


def miner_thresholds(params: GameParameters, lambda_d: float) -> MinerThresholds:
    if not (_finite(lambda_d) and 0.0 <= lambda_d <= 1.0):
        raise DomainError(f"lambda_d must lie in [0, 1], got {lambda_d!r}")
    odds = betting_odds(params.p, params.epsilon)
    return MinerThresholds(
        Lambda=lambda_d * params.b_d * (odds.beta_d + 1.0),
        Lambda_low=params.R_w - params.C_d / (1.0 - params.p),
        Lambda_high=params.R_w + params.C_n / params.p,
    )


def canonical_strategy_for_target(P_d_target: float, p: float) -> MinerStrategy:
    """The cheapest strategy publishing ``D`` with probability ``P_d_target``.

    At most one withholding probability is non-zero; any other strategy with
    the same ``P_d`` withholds strictly more in both directions.
    """
    if not (_finite(P_d_target) and 0.0 <= P_d_target <= 1.0):
        raise DomainError(f"P_d target must lie in [0, 1], got {P_d_target!r}")
    if not (_finite(p) and 0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if P_d_target <= p:
        return MinerStrategy(0.0, min(1.0, max(0.0, 1.0 - P_d_target / p)))
    return MinerStrategy(min(1.0, max(0.0, (P_d_target - p) / (1.0 - p))), 0.0)
