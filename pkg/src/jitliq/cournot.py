"""Two Cournot-competing JIT LPs with finite endowments.

When one JIT LP arrives it behaves like the monopolist.  When both arrive
each deposits its whole endowment, so the both-arrive depth is
(1 + 2 * nu_hat) * d_adj with nu_hat = e_j_adj / d_adj.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .amm import price_adjust
from .baseline import adverse_selection_cost, jit_multiple
from .errors import DomainError, SolverError
from .params import CompetitionParams


def nu_hat(d_adj_p: float, e_adj_j: float) -> float:
    if d_adj_p < 0.0:
        raise DomainError("passive depth must be nonnegative")
    return e_adj_j / d_adj_p if d_adj_p > 0.0 else 0.0


def cournot_foc(mu: float, f: float, pi: float, nu_h: float, lam: float = 1.0) -> float:
    return kernels.foc_value(mu, f, pi, lam, nu_h, True)


def solve_mu_cournot(params: CompetitionParams, d_adj_p: float):
    """Uninformed multiple under competition; same return shape as ``solve_mu``."""
    from .baseline import MuSolution

    m = params.market
    if not m.zeta_u > 1.0 + m.f:
        raise DomainError("uninformed trader does not trade unless zeta_u > 1 + f")
    nh = nu_hat(d_adj_p, params.e_j_adj)
    target = (1.0 + m.f) / m.zeta_u
    mu, it = kernels.solve_foc(target, m.f, m.pi, m.lam, nh, True)
    if it < 0:
        raise SolverError("could not bracket the competitive first-order condition")
    residual = abs(cournot_foc(mu, m.f, m.pi, nh, m.lam) - target)
    return MuSolution(mu, mu > m.lam * m.f, residual, it)


def cournot_revenue(mu: float, nu_c: float, nu_h: float, pi: float, f: float, lam: float = 1.0) -> float:
    alone = (1.0 - pi) ** 2 * (mu + mu / (1.0 + mu))
    s1 = (1.0 + (1.0 - lam) * nu_c) / (1.0 + nu_c)
    one = 2.0 * pi * (1.0 - pi) * s1 * (mu + (1.0 + nu_c) * mu / (1.0 + nu_c + mu))
    depth = 1.0 + 2.0 * nu_h
    s2 = (1.0 + (1.0 - lam) * 2.0 * nu_h) / depth
    two = pi * pi * s2 * (mu + depth * mu / (depth + mu))
    return (alone + one + two) * f


@dataclass
class CournotOutcome:
    d_adj_p: float
    mu_c: float
    nu_c: float
    nu_hat: float
    R_comp: float
    U: float
    single_deposit: float
    both_deposit: float
    assumption2_ok: bool
    feasible_k: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _subgame(params: CompetitionParams, d_adj_p: float) -> tuple[float, float, float, float]:
    """(mu_c, nu_c, nu_hat, R) for the JIT subgame at passive depth d_adj_p."""
    m = params.market
    sol = solve_mu_cournot(params, d_adj_p)
    nh = nu_hat(d_adj_p, params.e_j_adj)
    nu_c = jit_multiple(sol.mu, m.f, m.lam) if m.pi > 0.0 else 0.0
    return sol.mu, nu_c, nh, cournot_revenue(sol.mu, nu_c, nh, m.pi, m.f, m.lam)


def passive_utility_cournot(params: CompetitionParams, d_adj_p: float) -> float:
    m = params.market
    _, _, _, r = _subgame(params, d_adj_p)
    return m.alpha * adverse_selection_cost(m.zeta, m.psi, m.f) + (1.0 - m.alpha) * r


def cournot_outcome(params: CompetitionParams, d_adj_p: float, with_k: bool = True) -> CournotOutcome:
    """Full competitive subgame outcome at passive depth ``d_adj_p``.

    Raises NoNontrivialEquilibrium when the single-arrival deposit is unbounded.
    """
    m = params.market
    mu_c, nu_c, nh, r = _subgame(params, d_adj_p)
    u = m.alpha * adverse_selection_cost(m.zeta, m.psi, m.f) + (1.0 - m.alpha) * r
    single = nu_c * d_adj_p
    ok = single <= params.e_j_adj * (1.0 + 1e-12)
    warnings = [] if ok else ["single-arrival deposit exceeds the JIT endowment"]
    k = passive_k_equilibria(params) if with_k else []
    return CournotOutcome(
        d_adj_p, mu_c, nu_c, nh, r, u, single, params.e_j_adj if d_adj_p > 0.0 else 0.0, ok, k, warnings
    )


def passive_k_equilibria(params: CompetitionParams) -> list[int]:
    """Numbers of passive LPs (out of N) that deposit in some equilibrium.

    Level 0 is the trivial freeze.  Levels whose subgame has no nontrivial
    equilibrium count as negative utility.
    """
    from .errors import NoNontrivialEquilibrium

    m = params.market
    n = int(m.n)

    def util(k: int) -> float:
        d_adj = price_adjust(m.e_p * k / n, m.p)
        try:
            return passive_utility_cournot(params, d_adj)
        except NoNontrivialEquilibrium:
            return -math.inf

    us = {k: util(k) for k in range(1, n + 1)}
    feasible = []
    if us[1] < 0.0:
        feasible.append(0)
    for k in range(1, n):
        if us[k] >= 0.0 and us[k + 1] < 0.0:
            feasible.append(k)
    if us[n] > 0.0:
        feasible.append(n)
    return feasible


def single_arrival_threshold(f: float, lam: float) -> float:
    """Shock at which the single-arrival JIT deposit turns finite when pi = 1."""
    return (1.0 + f) / (0.5 * (2.0 + f) * math.sqrt((1.0 + lam * f) * (1.0 + f)) / (1.0 + f) ** 2)
