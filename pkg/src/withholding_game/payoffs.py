"""Expected payoffs of the user and the miner.

The ``*_values`` functions broadcast over numpy arrays of strategy
coordinates and are what the oracle and the dynamics evaluate; the
strategy-object wrappers are thin conveniences around them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GameParameters,
    MinerStrategy,
    UserStrategy,
    betting_odds,
    published_p_d,
)


@dataclass(frozen=True)
class PayoffPair:
    user: float
    miner: float


def user_payoff_values(lambda_d, lambda_n, omega_d, omega_n, params: GameParameters):
    P_d = published_p_d(omega_d, omega_n, params.p)
    P_n = 1.0 - P_d
    odds = betting_odds(params.p, params.epsilon)
    return (lambda_d * params.b_d * (odds.beta_d * P_d - P_n)
            + lambda_n * params.b_n * (odds.beta_n * P_n - P_d))


def miner_payoff_values(lambda_d, lambda_n, omega_d, omega_n, params: GameParameters):
    P_d = published_p_d(omega_d, omega_n, params.p)
    user = user_payoff_values(lambda_d, lambda_n, omega_d, omega_n, params)
    return (params.R_0 + P_d * params.R_w - user
            - omega_d * params.C_d - omega_n * params.C_n)


def user_payoff(user: UserStrategy, miner: MinerStrategy, params: GameParameters) -> float:
    return float(user_payoff_values(user.lambda_d, user.lambda_n,
                                    miner.omega_d, miner.omega_n, params))


def miner_payoff(user: UserStrategy, miner: MinerStrategy, params: GameParameters) -> float:
    return float(miner_payoff_values(user.lambda_d, user.lambda_n,
                                     miner.omega_d, miner.omega_n, params))


def payoff_pair(user: UserStrategy, miner: MinerStrategy, params: GameParameters) -> PayoffPair:
    return PayoffPair(user=user_payoff(user, miner, params),
                      miner=miner_payoff(user, miner, params))


def single_bet_expectation(b: float, p: float, epsilon: float) -> float:
    """Expected win of a lone bet ``b`` on an event of probability ``p``.

    Computed from the outcome distribution directly (win ``beta * b`` with
    probability ``p``, lose ``b`` otherwise) so it can serve as an
    independent check on the closed form ``-epsilon * beta * b``.
    """
    if b < 0:
        raise ValueError(f"bet must be >= 0, got {b}")
    beta = betting_odds(p, epsilon).beta_d
    return p * beta * b - (1.0 - p) * b


def payoff_terms(P_d, p: float, epsilon: float):
    """Per-unit-stake user gains ``(beta_d P_d - P_n, beta_n P_n - P_d)``."""
    P_d = np.asarray(P_d, dtype=float)
    odds = betting_odds(p, epsilon)
    P_n = 1.0 - P_d
    return odds.beta_d * P_d - P_n, odds.beta_n * P_n - P_d
