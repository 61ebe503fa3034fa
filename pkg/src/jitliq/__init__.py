"""Equilibrium engine and brute-force checks for just-in-time liquidity on AMMs."""

from .amm import PoolState, Scenario, Strategies, SwapOrder, delta_r, delta_s, fee_split, simulate_game
from .baseline import Classification, EquilibriumOutcome, solve_equilibrium, solve_mu
from .params import CompetitionParams, MarketParams, PoolParams

__all__ = [
    "Classification",
    "CompetitionParams",
    "EquilibriumOutcome",
    "MarketParams",
    "PoolParams",
    "PoolState",
    "Scenario",
    "Strategies",
    "SwapOrder",
    "delta_r",
    "delta_s",
    "fee_split",
    "simulate_game",
    "solve_equilibrium",
    "solve_mu",
]
