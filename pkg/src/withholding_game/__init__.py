"""Miner-vs-bettor block-withholding game.

Exact payoffs, best responses and Nash equilibria of a betting game that
lets users bet against miners on in-game random events, a brute-force grid
oracle that checks them, and a seeded Monte Carlo simulator.
"""

from .best_response import Interval, StrategyBox, miner_best_response, user_best_response
from .core import (
    GameParameters,
    MinerStrategy,
    MinerThresholds,
    Odds,
    UserStrategy,
    UserThresholds,
    betting_odds,
    canonical_strategy_for_target,
    miner_thresholds,
    published_distribution,
    user_thresholds,
    validate_parameters,
)
from .dynamics import DynamicsTrace, best_response_dynamics
from .equilibrium import (
    EquilibriumBound,
    EquilibriumSet,
    Regime,
    classify_regime,
    equilibrium_bound,
    solve_equilibrium,
)
from .errors import DomainError, ResourceError, UnsupportedInput
from .oracle import (
    StrategyGrid,
    VerificationReport,
    find_epsilon_nash,
    grid_best_response,
    verify_equilibrium,
)
from .payoffs import PayoffPair, miner_payoff, payoff_pair, single_bet_expectation, user_payoff
from .simulation import (
    SimulationConfig,
    SimulationReport,
    aggregate_miners_experiment,
    derive_forcing_costs,
    simulate,
)

__version__ = "0.1.0"
