"""Two-tier fee structure: the JIT LP keeps a fraction ``lam`` of its fee share.

Covers utility and welfare as functions of ``lam``, the welfare-optimal rate,
and the fee bound and shock threshold above which passive utility falls in
``lam`` everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amm import delta_r, price_adjust
from .baseline import solve_equilibrium, trader_foc, zeta_lower_lambda
from .errors import NoNontrivialEquilibrium, SolverError
from .params import MarketParams

__all__ = [
    "FeeDesignReport",
    "fbar",
    "fee_design_report",
    "optimal_lambda",
    "passive_utility",
    "welfare",
    "zeta_hat",
    "zeta_lower_lambda",
]


def passive_utility(market: MarketParams, lam: float) -> float | None:
    """Per-unit passive utility at ``lam``; None when no equilibrium exists."""
    eq = solve_equilibrium(market, lam)
    return eq.U if eq.exists else None


def fbar(mu: float, pi: float) -> float:
    """Largest fee for which utility falls in ``lam`` at trader multiple mu."""
    return pi * mu * (1.0 + mu) / (2.0 + mu * (2.0 + mu) + pi * ((1.0 + mu) ** 1.5 - 1.0))


def zeta_hat(f: float, pi: float) -> float | None:
    if f >= pi:
        return None
    if f == 0.0:
        return 1.0 / trader_foc(0.0, 0.0, pi, 1.0)
    lo, hi = 0.0, 1.0
    grow = 0
    while fbar(hi, pi) < f:
        lo, hi = hi, 2.0 * hi
        grow += 1
        if grow > 200:
            raise SolverError(f"fbar never reaches f={f} at pi={pi}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fbar(mid, pi) < f:
            lo = mid
        else:
            hi = mid
    mu_hat = 0.5 * (lo + hi)
    return (1.0 + f) / trader_foc(mu_hat, f, pi, 1.0)


def welfare(market: MarketParams, lam: float | None = None, unconditional: bool = False) -> float:
    """Expected gains from uninformed trade.

    Conditional on an uninformed arrival unless ``unconditional`` is set, in
    which case the (1 - alpha) arrival weight is applied.
    """
    eq = solve_equilibrium(market, lam)
    if not eq.exists:
        raise NoNontrivialEquilibrium("welfare needs an equilibrium")
    if eq.d_p_star == 0.0:
        return 0.0
    p, f, zu, pi = market.p, market.f, market.zeta_u, market.pi
    d_adj = price_adjust(eq.d_p_star, p)
    q_r = eq.mu * d_adj
    q_s = eq.mu * p * d_adj
    sell_gain = market.psi_u * (1.0 - 1.0 / zu) * p * (1.0 + f) * q_r
    buy_out = pi * delta_r(q_s, d_adj * (1.0 + eq.nu), p) + (1.0 - pi) * delta_r(q_s, d_adj, p)
    w = sell_gain + (1.0 - market.psi_u) * (zu - 1.0) * p * buy_out
    return (1.0 - market.alpha) * w if unconditional else w


def _u_or_neg(market: MarketParams, lam: float) -> float:
    u = passive_utility(market, lam)
    return -math.inf if u is None else u


def optimal_lambda(market: MarketParams, n_grid: int = 1024, tol: float = 1e-6) -> float | None:
    """Largest ``lam`` with nonnegative passive utility, or None if there is none.

    Rates without an equilibrium count as negative utility.
    """
    if _u_or_neg(market, 1.0) >= 0.0:
        return 1.0
    grid = np.linspace(0.0, 1.0, n_grid)
    ok = [lam for lam in grid if _u_or_neg(market, float(lam)) >= 0.0]
    if not ok:
        return None
    lo = float(ok[-1])
    hi = float(grid[np.searchsorted(grid, lo) + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _u_or_neg(market, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class FeeDesignReport:
    lambda_grid: list[float]
    U_of_lambda: list[float | None]
    W_of_lambda: list[float | None]
    lambda_star: float | None
    freeze_interval: tuple[float, float] | None
    fbar_ok: bool
    zeta_hat: float | None

    def as_dict(self) -> dict:
        return {
            "lambda_grid": self.lambda_grid,
            "U_of_lambda": self.U_of_lambda,
            "W_of_lambda": self.W_of_lambda,
            "lambda_star": self.lambda_star,
            "freeze_interval": list(self.freeze_interval) if self.freeze_interval else None,
            "fbar_ok": self.fbar_ok,
            "zeta_hat": self.zeta_hat,
        }


def fee_design_report(market: MarketParams, n_grid: int = 101, unconditional: bool = False) -> FeeDesignReport:
    grid = [float(x) for x in np.linspace(0.0, 1.0, n_grid)]
    us: list[float | None] = []
    ws: list[float | None] = []
    for lam in grid:
        u = passive_utility(market, lam)
        us.append(u)
        ws.append(None if u is None else welfare(market, lam, unconditional))
    frozen = [lam for lam, u in zip(grid, us) if u is not None and u < 0.0]
    return FeeDesignReport(
        lambda_grid=grid,
        U_of_lambda=us,
        W_of_lambda=ws,
        lambda_star=optimal_lambda(market),
        freeze_interval=(min(frozen), max(frozen)) if frozen else None,
        fbar_ok=market.f < market.pi,
        zeta_hat=zeta_hat(market.f, market.pi),
    )
