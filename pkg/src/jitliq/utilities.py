"""Explicit per-path utilities, written directly from pool shares.

These are the closed-form settlement formulas the simulator must reproduce.
``jit_depths`` holds the price-adjusted deposits of JIT LPs that arrived.
"""

from __future__ import annotations

from typing import Sequence

from .amm import Scenario, delta_r, delta_s
from .params import MarketParams


def path_utilities(
    market: MarketParams,
    scenario: Scenario,
    d_adj_p: float,
    q: float,
    jit_depths: Sequence[float] = (),
    lam: float | None = None,
) -> dict:
    lam = market.lam if lam is None else lam
    p, f = market.p, market.f
    depth = d_adj_p + sum(jit_depths)
    if depth <= 0.0 or q <= 0.0:
        return {"passive": 0.0, "jit": [0.0] * len(jit_depths), "trader": 0.0, "arbitrageur": 0.0}
    s_p = d_adj_p / depth
    s_eff = (d_adj_p + (1.0 - lam) * sum(jit_depths)) / depth
    shares = [d / depth for d in jit_depths]
    scenario = Scenario(scenario)
    z, zu = market.zeta, market.zeta_u

    if scenario is Scenario.IS:
        out = delta_s(q, depth, p)
        passive = s_p * (p * q / z - out) + s_eff * p * f * q / z
        jit = [s * (p * (1.0 + lam * f) * q / z - out) for s in shares]
        trader = out - p * (1.0 + f) * q / z
        arb = 0.0
    elif scenario is Scenario.IB:
        out = delta_r(q, depth, p)
        passive = s_p * (q - z * p * out) + s_eff * f * q
        jit = [s * ((1.0 + lam * f) * q - z * p * out) for s in shares]
        trader = z * p * out - (1.0 + f) * q
        arb = 0.0
    elif scenario is Scenario.US:
        out = delta_s(q, depth, p)
        passive = (s_eff * p * q + s_p * out) * f
        jit = [s * (p * (1.0 + lam * f) * q - out) for s in shares]
        trader = out - p * (1.0 + f) * q / zu
        arb = s_p * (p * q - (1.0 + f) * out)
    else:
        out = delta_r(q, depth, p)
        passive = (s_eff * q + s_p * p * out) * f
        jit = [s * ((1.0 + lam * f) * q - p * out) for s in shares]
        trader = zu * p * out - (1.0 + f) * q
        arb = s_p * (q - p * (1.0 + f) * out)
    return {"passive": passive, "jit": jit, "trader": trader, "arbitrageur": arb}
