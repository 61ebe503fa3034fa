"""Equilibrium of the game with a single (monopolist) JIT LP.

Multiples are normalised by price-adjusted passive depth: the uninformed
trader sells mu * d_adj risky coins (or buys with mu * p * d_adj stable coins)
and the JIT LP deposits nu * d_adj.  ``lam`` is the share of its pro-rata fee
the JIT LP keeps; ``lam = 1`` is the plain pro-rata pool.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from . import kernels
from .amm import Scenario, SwapOrder, price_adjust
from .errors import DomainError, NoNontrivialEquilibrium, SolverError, UnboundedBestResponse
from .params import MarketParams


class Classification(str, enum.Enum):
    COMPLEMENT = "Complement"
    CROWD_OUT = "CrowdOut"
    UNDEFINED = "Undefined"


class MuSolution(NamedTuple):
    mu: float
    nontrivial: bool
    residual: float
    iterations: int


def zeta_lower(f: float, pi: float) -> float:
    """Smallest uninformed shock with a nontrivial equilibrium (plain pool)."""
    return 2.0 * (1.0 + f) ** 3 / (2.0 + pi * f * (3.0 + f))


def zeta_lower_lambda(f: float, lam: float, pi: float) -> float:
    """Existence threshold under transfer rate ``lam``.

    This is the shock at which the trader's optimal multiple equals f.
    """
    root = math.sqrt((1.0 + f) * (1.0 + lam * f))
    return 2.0 * (1.0 + f) ** 3 / (2.0 + pi * ((2.0 + f) * root - 2.0))


def informed_multiple(zeta: float, f: float) -> float:
    if not zeta > 1.0 + f:
        raise DomainError("informed trader does not trade unless zeta > 1 + f")
    return math.sqrt(zeta / (1.0 + f)) - 1.0


def trader_foc(mu: float, f: float, pi: float, lam: float = 1.0) -> float:
    return kernels.foc_value(mu, f, pi, lam, 0.0, False)


def solve_mu(f: float, pi: float, zeta_u: float, lam: float = 1.0) -> MuSolution:
    """Uninformed multiple: root of trader_foc(mu) = (1 + f) / zeta_u."""
    if not zeta_u > 1.0 + f:
        raise DomainError("uninformed trader does not trade unless zeta_u > 1 + f")
    target = (1.0 + f) / zeta_u
    mu, it = kernels.solve_foc(target, f, pi, lam, 0.0, False)
    if it < 0:
        raise SolverError("could not bracket the trader first-order condition")
    return MuSolution(mu, mu > f, abs(trader_foc(mu, f, pi, lam) - target), it)


def jit_multiple(mu: float, f: float, lam: float = 1.0) -> float:
    if not mu > lam * f:
        raise NoNontrivialEquilibrium("JIT deposit is unbounded when mu <= lam * f")
    root = math.sqrt((1.0 + lam * f) * (1.0 + mu))
    return (lam * f * (1.0 + mu) + mu * root) / (mu - lam * f)


def jit_best_response(d_adj_p: float, q: float, f: float, lam: float = 1.0) -> float:
    """Closed-form JIT deposit facing an uninformed sell of q risky coins."""
    if not d_adj_p > 0.0:
        raise DomainError("passive depth must be positive")
    lf = lam * f
    if q <= lf * d_adj_p:
        raise UnboundedBestResponse("order too small relative to retained fee")
    num = lf * d_adj_p * (d_adj_p + q) + q * math.sqrt((1.0 + lf) * d_adj_p * (d_adj_p + q))
    return num / (q - lf * d_adj_p)


def adverse_selection_cost(zeta: float, psi: float, f: float) -> float:
    """Per-unit expected passive loss to the informed trader (negative)."""
    if not zeta > 1.0 + f:
        raise DomainError("zeta must exceed 1 + f")
    sell_leg = (1.0 - math.sqrt((1.0 + f) / zeta)) ** 2
    buy_leg = (math.sqrt(zeta) - math.sqrt(1.0 + f)) ** 2
    return -(psi * sell_leg + (1.0 - psi) * buy_leg)


def effective_share(nu: float, lam: float) -> float:
    return (1.0 + (1.0 - lam) * nu) / (1.0 + nu)


def fee_revenue(mu: float, nu: float, pi: float, f: float, lam: float = 1.0) -> float:
    """Per-unit expected passive fee income from uninformed flow."""
    alone = (1.0 - pi) * (mu + mu / (1.0 + mu))
    if pi == 0.0:
        return alone * f
    with_jit = effective_share(nu, lam) * (mu + (1.0 + nu) * mu / (1.0 + nu + mu))
    return (alone + pi * with_jit) * f


def no_jit_revenue(zeta_u: float, f: float) -> float:
    """Revenue when no JIT LP can arrive; needs only zeta_u > 1 + f."""
    mu0 = math.sqrt(zeta_u / (1.0 + f)) - 1.0
    return (mu0 + mu0 / (1.0 + mu0)) * f


@dataclass
class EquilibriumOutcome:
    exists: bool
    lam: float
    d_p_star: float = 0.0
    mu_i: float = 0.0
    mu: float = 0.0
    nu: float = 0.0
    C: float = 0.0
    R: float = 0.0
    U: float = 0.0
    classification: Classification = Classification.UNDEFINED
    zeta_lower: float = 0.0
    swap_orders: dict = field(default_factory=dict)
    swap_values: dict = field(default_factory=dict)
    jit_deposits: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "exists": self.exists,
            "lam": self.lam,
            "d_p_star": self.d_p_star,
            "mu_i": self.mu_i,
            "mu": self.mu,
            "nu": self.nu,
            "C": self.C,
            "R": self.R,
            "U": self.U,
            "classification": self.classification.value,
            "zeta_lower": self.zeta_lower,
            "swap_orders": {k.value: {"q_r": v.q_r, "q_s": v.q_s} for k, v in self.swap_orders.items()},
            "swap_values": {k.value: v for k, v in self.swap_values.items()},
            "jit_deposits": {k.value: v for k, v in self.jit_deposits.items()},
        }


def classify_revenue(r_without: float, r_with: float) -> Classification:
    return Classification.COMPLEMENT if r_without <= r_with else Classification.CROWD_OUT


def solve_equilibrium(market: MarketParams, lam: float | None = None) -> EquilibriumOutcome:
    lam = market.lam if lam is None else lam
    if not 0.0 <= lam <= 1.0:
        raise DomainError("transfer rate must lie in [0, 1]")
    f, pi = market.f, market.pi
    threshold = zeta_lower_lambda(f, lam, pi)
    if not market.zeta_u > threshold:
        return EquilibriumOutcome(False, lam, zeta_lower=threshold)

    sol = solve_mu(f, pi, market.zeta_u, lam)
    mu = sol.mu
    nu = jit_multiple(mu, f, lam)
    mu_i = informed_multiple(market.zeta, f)
    C = adverse_selection_cost(market.zeta, market.psi, f)
    R = fee_revenue(mu, nu, pi, f, lam)
    U = market.alpha * C + (1.0 - market.alpha) * R
    d_p = market.e_p if U >= 0.0 else 0.0

    cls = Classification.UNDEFINED
    if pi > 0.0:
        cls = classify_revenue(no_jit_revenue(market.zeta_u, f), R)

    p = market.p
    d_adj = price_adjust(d_p, p)
    orders = {
        Scenario.IS: SwapOrder(q_r=mu_i * d_adj),
        Scenario.IB: SwapOrder(q_s=mu_i * p * d_adj),
        Scenario.US: SwapOrder(q_r=mu * d_adj),
        Scenario.UB: SwapOrder(q_s=mu * p * d_adj),
    }
    values = {
        Scenario.IS: p * mu_i * d_adj,
        Scenario.IB: p * mu_i * d_adj,
        Scenario.US: p * mu * d_adj,
        Scenario.UB: p * mu * d_adj,
    }
    # JIT deposits in risky coins (undo price adjustment)
    jit = {
        Scenario.IS: 0.0,
        Scenario.IB: 0.0,
        Scenario.US: nu * d_p,
        Scenario.UB: nu * d_p,
    }
    return EquilibriumOutcome(
        True, lam, d_p, mu_i, mu, nu, C, R, U, cls, threshold, orders, values, jit
    )
