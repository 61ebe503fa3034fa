"""Constant-product pool with a price range, and the one-block game simulator.

All depths are price-adjusted (``d_adj = sqrt(p) * d``).  A pool of depth D
has virtual reserves (D, p*D); real reserves subtract the range offsets
D*sqrt(p/b) and D*sqrt(p*a).  Swap outputs depend on virtual reserves only,
so the trading functions below are range-free.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContractViolation, DomainError
from .params import MarketParams, PoolParams


def price_adjust(d: float, p: float) -> float:
    return math.sqrt(p) * d


def delta_s(r: float, d_adj: float, p: float) -> float:
    """Stable coins paid out for r risky coins (fee excluded)."""
    if r < 0.0 or d_adj < 0.0:
        raise DomainError("swap input and depth must be nonnegative")
    if math.isinf(d_adj):
        return p * r
    if d_adj == 0.0:
        return 0.0
    return p * d_adj * r / (d_adj + r)


def delta_r(s: float, d_adj: float, p: float) -> float:
    """Risky coins paid out for s stable coins (fee excluded)."""
    if s < 0.0 or d_adj < 0.0:
        raise DomainError("swap input and depth must be nonnegative")
    if math.isinf(d_adj):
        return s / p
    if d_adj == 0.0:
        return 0.0
    return d_adj * s / (p * d_adj + s)


def fee_split(fee_total: float, d_p: float, d_j: float, lam: float) -> tuple[float, float]:
    """Split a fee between passive and JIT liquidity.

    The JIT LP keeps ``lam`` of its pro-rata share; the rest goes to passive.
    The passive part is computed as the remainder so both parts add up to
    ``fee_total``.
    """
    total = d_p + d_j
    if total <= 0.0:
        return 0.0, 0.0
    jit = fee_total * lam * d_j / total
    return fee_total - jit, jit


class Scenario(str, enum.Enum):
    IS = "IS"  # informed sell
    IB = "IB"  # informed buy
    US = "US"  # uninformed sell
    UB = "UB"  # uninformed buy

    @property
    def informed(self) -> bool:
        return self in (Scenario.IS, Scenario.IB)

    @property
    def sell(self) -> bool:
        return self in (Scenario.IS, Scenario.US)

    def final_price(self, market: MarketParams) -> float:
        """Price at which period-5 holdings are valued."""
        if self is Scenario.IS:
            return market.p / market.zeta
        if self is Scenario.IB:
            return market.p * market.zeta
        return market.p

    def trader_price(self, market: MarketParams) -> float:
        """Trader's private valuation of the risky coin."""
        if self is Scenario.IS:
            return market.p / market.zeta
        if self is Scenario.IB:
            return market.p * market.zeta
        if self is Scenario.US:
            return market.p / market.zeta_u
        return market.p * market.zeta_u

    def weight(self, market: MarketParams) -> float:
        """Probability of this scenario."""
        if self.informed:
            w = market.alpha
            return w * (market.psi if self is Scenario.IS else 1.0 - market.psi)
        w = 1.0 - market.alpha
        return w * (market.psi_u if self is Scenario.US else 1.0 - market.psi_u)


@dataclass(frozen=True)
class SwapOrder:
    """At most one side is nonzero: q_r risky in (sell) or q_s stable in (buy)."""

    q_r: float = 0.0
    q_s: float = 0.0

    def __post_init__(self) -> None:
        if self.q_r < 0.0 or self.q_s < 0.0:
            raise ContractViolation("swap order amounts must be nonnegative")
        if self.q_r > 0.0 and self.q_s > 0.0:
            raise ContractViolation("a swap order sells one coin only")


@dataclass(frozen=True)
class PoolState:
    reserve_risky: float
    reserve_stable: float
    depth_adj: float
    period_tag: int
    label: str

    def virtual(self, pool: PoolParams) -> tuple[float, float]:
        return (
            self.reserve_risky + _offset_risky(self.depth_adj, pool),
            self.reserve_stable + _offset_stable(self.depth_adj, pool),
        )

    def as_dict(self) -> dict:
        return {
            "period": self.period_tag,
            "label": self.label,
            "reserve_risky": self.reserve_risky,
            "reserve_stable": self.reserve_stable,
            "depth_adj": self.depth_adj,
        }


def _offset_risky(depth: float, pool: PoolParams) -> float:
    return 0.0 if math.isinf(pool.b) else depth * math.sqrt(pool.p / pool.b)


def _offset_stable(depth: float, pool: PoolParams) -> float:
    return depth * math.sqrt(pool.p * pool.a)


def _state(x: float, y: float, depth: float, pool: PoolParams, tag: int, label: str) -> PoolState:
    risky = x - _offset_risky(depth, pool)
    stable = y - _offset_stable(depth, pool)
    tol = 1e-12 * max(1.0, abs(x), abs(y))
    if risky < -tol or stable < -tol:
        raise ContractViolation(f"swap exhausts range liquidity at '{label}'")
    return PoolState(risky, stable, depth, tag, label)


@dataclass(frozen=True)
class Strategies:
    """Deposits in risky coins (before price adjustment) and the swap order."""

    d_p: float
    swap: SwapOrder
    jit_deposits: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.d_p < 0.0 or any(d < 0.0 for d in self.jit_deposits):
            raise ContractViolation("deposits must be nonnegative")
        if any(math.isinf(d) for d in self.jit_deposits) or math.isinf(self.d_p):
            raise ContractViolation("deposits must be finite")


@dataclass
class GameResult:
    passive: float
    jit: tuple[float, ...]
    trader: float
    arbitrageur: float
    trace: list[PoolState] = field(default_factory=list)
    swap_output: float = 0.0

    def payoffs(self) -> dict:
        return {
            "passive": self.passive,
            "jit": list(self.jit),
            "trader": self.trader,
            "arbitrageur": self.arbitrageur,
        }


def simulate_game(
    pool: PoolParams,
    market: MarketParams,
    scenario: Scenario,
    strategies: Strategies,
    jit_arrivals: Sequence[bool] | None = None,
    lam: float | None = None,
) -> GameResult:
    """Play one realised path of the game and settle every agent.

    ``jit_arrivals[j]`` says whether JIT LP j shows up; absent LPs deposit
    nothing.  Payoffs are in stable coins, valued at the final price (the
    shocked price in informed scenarios, p otherwise).  The trader is valued
    at its private price.  Fees go to the LPs present when they are paid, so
    the arbitrageur's reverse-trade fee goes to passive liquidity only.
    """
    if abs(pool.p - market.p) > 1e-15 * market.p or abs(pool.f - market.f) > 1e-15:
        raise ContractViolation("pool and market disagree on price or fee")
    lam = market.lam if lam is None else lam
    p, f = pool.p, pool.f
    scenario = Scenario(scenario)
    arrivals = tuple(jit_arrivals) if jit_arrivals is not None else (True,) * len(strategies.jit_deposits)
    if len(arrivals) != len(strategies.jit_deposits):
        raise ContractViolation("one arrival flag per JIT LP is required")

    d_pa = price_adjust(strategies.d_p, p)
    d_ja = [price_adjust(d, p) if a else 0.0 for d, a in zip(strategies.jit_deposits, arrivals)]
    jit_total = sum(d_ja)
    depth = d_pa + jit_total
    sell = scenario.sell
    q = strategies.swap.q_r if sell else strategies.swap.q_s
    if (strategies.swap.q_s if sell else strategies.swap.q_r) > 0.0:
        raise ContractViolation(f"scenario {scenario.value} requires a {'sell' if sell else 'buy'} order")

    p_final = scenario.final_price(market)
    trace = [_state(d_pa, p * d_pa, d_pa, pool, 1, "passive LPs deposit")]
    trace.append(_state(d_pa, p * d_pa, d_pa, pool, 2, "trader submits swap order"))
    if not any(arrivals) or not d_ja:
        trace.append(_state(d_pa, p * d_pa, d_pa, pool, 3, "no JIT LP arrives"))
    else:
        n_arr = sum(1 for a in arrivals if a)
        trace.append(_state(d_pa, p * d_pa, d_pa, pool, 3, f"{n_arr} JIT LP(s) arrive"))
        trace.append(_state(depth, p * depth, depth, pool, 4, "JIT LPs deposit"))

    if depth <= 0.0 or q == 0.0:
        # empty pool or empty order: nothing trades
        trace.append(_state(depth, p * depth, depth, pool, 4, "swap rejected" if q > 0.0 else "no swap"))
        if jit_total > 0.0:
            trace.append(_state(d_pa, p * d_pa, d_pa, pool, 4, "JIT LPs withdraw"))
        trace.append(_state(d_pa, p * d_pa, d_pa, pool, 5, "no reverse trade"))
        return GameResult(0.0, tuple(0.0 for _ in d_ja), 0.0, 0.0, trace, 0.0)

    # period 4 swap against virtual reserves (depth, p*depth)
    fee = f * q
    fee_p, fee_j = fee_split(fee, d_pa, jit_total, lam)
    if sell:
        out = delta_s(q, depth, p)
        x, y = depth + q, p * depth - out
    else:
        out = delta_r(q, depth, p)
        x, y = depth - out, p * depth + q
    trace.append(_state(x, y, depth, pool, 4, "swap executes"))

    s_p = d_pa / depth
    jit_pay = []
    for dj in d_ja:
        share = dj / depth
        fee_share = fee_j * dj / jit_total if jit_total > 0.0 else 0.0
        if sell:
            val = share * (p_final * q - out) + fee_share * p_final
        else:
            val = share * (q - p_final * out) + fee_share
        jit_pay.append(val)
    if jit_total > 0.0:
        x, y = s_p * x, s_p * y
        trace.append(_state(x, y, d_pa, pool, 4, "JIT LPs withdraw"))

    # fees accrue outside the pool; value them in stable coins at the final price
    passive_fee_value = fee_p * (p_final if sell else 1.0)
    arbitrageur = 0.0
    if scenario.informed:
        trace.append(_state(x, y, d_pa, pool, 5, "price moves; no reverse trade"))
    else:
        x_target, y_target = d_pa, p * d_pa
        if sell:
            # arbitrageur pays stable, receives risky
            pay, recv = y_target - y, x - x_target
            arbitrageur = p * recv - (1.0 + f) * pay
            passive_fee_value += f * pay
        else:
            pay, recv = x_target - x, y - y_target
            arbitrageur = recv - p * (1.0 + f) * pay
            passive_fee_value += p * f * pay
        x, y = x_target, y_target
        trace.append(_state(x, y, d_pa, pool, 5, "arbitrageur reverse trade"))

    passive = p_final * (x - d_pa) + (y - p * d_pa) + passive_fee_value
    v_t = scenario.trader_price(market)
    if sell:
        trader = out - v_t * (1.0 + f) * q
    else:
        trader = v_t * out - (1.0 + f) * q
    return GameResult(passive, tuple(jit_pay), trader, arbitrageur, trace, out)
