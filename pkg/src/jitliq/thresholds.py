"""Crowding-out versus complement classification and the shock thresholds.

The JIT LP complements passive liquidity when expected uninformed volume with
JIT exceeds the no-JIT volume.  Both volumes are monotone in the shock, so the
comparison reduces to G(mu) >= 2 with

    G(mu) = M(mu) * (2 + V^2 + V * sqrt(4 + V^2)),

where M is the trader's marginal payoff and V the JIT-regime volume at mu.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import (
    Classification,
    classify_revenue,
    no_jit_revenue,
    solve_equilibrium,
    trader_foc,
    zeta_lower,
)
from .cournot import cournot_foc, cournot_outcome, nu_hat
from .errors import DomainError, NoNontrivialEquilibrium, SolverError
from .params import CompetitionParams, MarketParams

EDGE = 1e-9


class ThresholdKind(str, enum.Enum):
    THRESHOLD = "Threshold"
    ALWAYS_COMPLEMENT = "AlwaysComplement"
    ALWAYS_CROWD_OUT = "AlwaysCrowdOut"


@dataclass
class ThresholdResult:
    kind: ThresholdKind
    value: float | None = None
    mu_star: float | None = None
    residual: float | None = None
    bracket: tuple[float, float] | None = None
    regime: str = "monotone"

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "mu_star": self.mu_star,
            "residual": self.residual,
            "bracket": list(self.bracket) if self.bracket else None,
            "regime": self.regime,
        }


def volume_no_jit(zeta_u: float, f: float) -> float:
    if zeta_u < 1.0 + f:
        raise DomainError("zeta_u must be at least 1 + f")
    return math.sqrt(zeta_u / (1.0 + f)) - math.sqrt((1.0 + f) / zeta_u)


def volume_with_jit(mu: float, f: float, pi: float) -> float:
    if not mu > f:
        raise DomainError("volume with JIT needs mu > f")
    alone = (1.0 - pi) * (mu + mu / (1.0 + mu))
    return alone + pi * (math.sqrt((1.0 + mu) / (1.0 + f)) - math.sqrt((1.0 + f) / (1.0 + mu)))


def volume_cournot(mu: float, f: float, pi: float, nu_h: float) -> float:
    if not mu > f:
        raise DomainError("volume with JIT needs mu > f")
    depth = 1.0 + 2.0 * nu_h
    return (
        (1.0 - pi) ** 2 * (mu + mu / (1.0 + mu))
        + 2.0 * pi * (1.0 - pi) * (math.sqrt((1.0 + mu) / (1.0 + f)) - math.sqrt((1.0 + f) / (1.0 + mu)))
        + pi * pi * (mu / depth + mu / (depth + mu))
    )


def _lift(v: float) -> float:
    return 2.0 + v * v + v * math.sqrt(4.0 + v * v)


def g_monopoly(mu: float, f: float, pi: float) -> float:
    return trader_foc(mu, f, pi, 1.0) * _lift(volume_with_jit(mu, f, pi))


def g_cournot(mu: float, f: float, pi: float, nu_h: float) -> float:
    return cournot_foc(mu, f, pi, nu_h, 1.0) * _lift(volume_cournot(mu, f, pi, nu_h))


def zeta_star_closed(f: float) -> float:
    return (math.sqrt(f) + math.sqrt(1.0 + f)) ** 2


def _bisect_increasing(g, lo: float, hi: float, level: float = 2.0) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zeta_star(f: float, pi: float) -> ThresholdResult:
    """Shock above which the monopolist JIT LP complements passive liquidity."""
    if not 0.0 < pi <= 1.0:
        raise DomainError("pi must lie in (0, 1]")
    if f == 0.0:
        # closed form gives zeta* = 1, below every admissible zeta_u
        return ThresholdResult(ThresholdKind.ALWAYS_COMPLEMENT)
    lo = f * (1.0 + EDGE)
    g = lambda mu: g_monopoly(mu, f, pi)  # noqa: E731
    if g(lo) >= 2.0:
        return ThresholdResult(ThresholdKind.ALWAYS_COMPLEMENT)
    hi = max(2.0 * lo, 1e-3)
    grow = 0
    while g(hi) < 2.0:
        lo, hi = hi, 2.0 * hi
        grow += 1
        if grow > 200:
            raise SolverError(f"no crossing of G = 2 found for f={f}, pi={pi}")
    bracket = (lo, hi)
    mu = _bisect_increasing(g, lo, hi)
    return ThresholdResult(
        ThresholdKind.THRESHOLD, (1.0 + f) / trader_foc(mu, f, pi, 1.0), mu, abs(g(mu) - 2.0), bracket
    )


def classify(market: MarketParams, lam: float | None = None) -> Classification:
    """Complement iff no-JIT revenue <= revenue with JIT at the market's pi."""
    eq = solve_equilibrium(market, lam)
    if not eq.exists:
        raise NoNontrivialEquilibrium("classification needs an equilibrium at pi")
    return classify_revenue(no_jit_revenue(market.zeta_u, market.f), eq.R)


def classify_cournot(params: CompetitionParams, d_adj_p: float) -> Classification:
    m = params.market
    out = cournot_outcome(params, d_adj_p, with_k=False)
    if not out.mu_c > m.f:
        raise NoNontrivialEquilibrium("single-arrival JIT deposit is unbounded")
    return classify_revenue(no_jit_revenue(m.zeta_u, m.f), out.R_comp)


def _mu_for_zeta(zeta_u: float, f: float, pi: float, nu_h: float) -> float:
    from . import kernels

    mu, it = kernels.solve_foc((1.0 + f) / zeta_u, f, pi, 1.0, nu_h, True)
    if it < 0:
        raise SolverError("could not bracket the competitive first-order condition")
    return mu


def zeta_star_cournot(
    params: CompetitionParams, d_adj_p: float, zeta_band: tuple[float, float] | None = None, samples: int = 1000
) -> ThresholdResult:
    """Competitive threshold at passive depth ``d_adj_p`` within an admissible band.

    G is sampled across the band; a monotone sample uses bisection on the
    single crossing, otherwise the first crossing from below is reported and
    ``regime`` is set to "scan".
    """
    m = params.market
    f, pi = m.f, m.pi
    if not 0.0 < pi <= 1.0:
        raise DomainError("pi must lie in (0, 1]")
    nh = nu_hat(d_adj_p, params.e_j_adj)
    band = zeta_band or params.zeta_band
    if band is None:
        lo_z = zeta_lower(f, pi)
        band = (lo_z, 10.0 * lo_z)
    mu_lo = max(_mu_for_zeta(band[0], f, pi, nh), f * (1.0 + EDGE))
    mu_hi = _mu_for_zeta(band[1], f, pi, nh)
    if mu_hi <= mu_lo:
        raise DomainError("admissible band is empty above the single-arrival pole")
    g = lambda mu: g_cournot(mu, f, pi, nh)  # noqa: E731
    grid = np.linspace(mu_lo, mu_hi, samples)
    vals = np.array([g(x) for x in grid])
    monotone = bool(np.all(np.diff(vals) > 0.0))
    above = vals >= 2.0
    regime = "monotone" if monotone else "scan"
    if above.all():
        return ThresholdResult(ThresholdKind.ALWAYS_COMPLEMENT, regime=regime)
    if not above.any():
        return ThresholdResult(ThresholdKind.ALWAYS_CROWD_OUT, regime=regime)
    k = int(np.argmax(above))
    if k == 0:
        # starts above the line and dips below later: only a scan can say where
        k = int(np.argmax(~above))
        k += int(np.argmax(above[k:]))
    lo, hi = float(grid[k - 1]), float(grid[k])
    mu = _bisect_increasing(g, lo, hi)
    value = (1.0 + f) / cournot_foc(mu, f, pi, nh, 1.0)
    return ThresholdResult(ThresholdKind.THRESHOLD, value, mu, abs(g(mu) - 2.0), (lo, hi), regime)


def smallest_monotone_nu_bar(params: CompetitionParams, nu_bars, samples: int = 1000) -> float | None:
    """Smallest tested endowment ratio at which sampled competitive G is increasing."""
    m = params.market
    for nb in sorted(nu_bars):
        trial = CompetitionParams(m, e_j=nb * m.e_p, zeta_band=params.zeta_band)
        res = zeta_star_cournot(trial, math.sqrt(m.p) * m.e_p, samples=samples)
        if res.regime == "monotone":
            return float(nb)
    return None


@dataclass
class ThresholdReport:
    zeta_lower: float
    zeta_star: ThresholdResult
    zeta_star_closed: float | None
    zeta_star_cournot: ThresholdResult | None = None
    classification_at: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "zeta_lower": self.zeta_lower,
            "zeta_star": self.zeta_star.as_dict(),
            "zeta_star_closed": self.zeta_star_closed,
            "zeta_star_cournot": self.zeta_star_cournot.as_dict() if self.zeta_star_cournot else None,
            "classification_at": self.classification_at,
        }


def threshold_report(
    market: MarketParams,
    competition: CompetitionParams | None = None,
    d_adj_p: float | None = None,
    samples=(),
) -> ThresholdReport:
    f, pi = market.f, market.pi
    zs = zeta_star(f, pi)
    comp = None
    if competition is not None:
        depth = math.sqrt(market.p) * market.e_p if d_adj_p is None else d_adj_p
        comp = zeta_star_cournot(competition, depth)
    labels = {}
    for z in samples:
        try:
            labels[repr(float(z))] = classify(market.with_(zeta_u=float(z))).value
        except (NoNontrivialEquilibrium, DomainError):
            labels[repr(float(z))] = "NoEquilibrium"
    return ThresholdReport(
        zeta_lower(f, pi), zs, zeta_star_closed(f) if pi == 1.0 else None, comp, labels
    )
