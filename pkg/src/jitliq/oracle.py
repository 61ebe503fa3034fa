"""Brute-force verification.

Best responses are located by maximising payoffs on refined grids.  The
trader's objective embeds each JIT LP's deposit found numerically from the
JIT utility's first-order sign, never from closed forms.  Closed-form values
are read only in the ``compare`` step of each check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import baseline, cournot, kernels
from .amm import PoolParams, Scenario, Strategies, SwapOrder, simulate_game
from .params import CompetitionParams, MarketParams
from .utilities import path_utilities

TOP = 1.0 - 1e-9
DEFAULT_SEED = 20240101


@dataclass(frozen=True)
class GridSpec:
    lo: float = 0.0
    hi: float = TOP
    n: int = 4001
    refine_rounds: int = 3

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.n < 3:
            raise ValueError("grid needs at least 3 points")

    @property
    def resolution(self) -> float:
        return (self.hi - self.lo) / (self.n - 1) / 10**self.refine_rounds


@dataclass
class GridResult:
    value: float  # argmax in natural units (coins)
    coord: float  # argmax in grid coordinates
    resolution: float
    at_top: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class Check:
    name: str
    closed_form: float
    grid_value: float
    abs_gap: float
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class OracleReport:
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, closed: float, grid: float, tol: float, note: str = "") -> Check:
        gap = abs(closed - grid)
        c = Check(name, float(closed), float(grid), float(gap), float(tol), bool(gap <= tol), note)
        self.checks.append(c)
        return c

    def flag(self, name: str, ok: bool, note: str = "") -> Check:
        c = Check(name, math.nan, math.nan, 0.0 if ok else math.inf, 0.0, bool(ok), note)
        self.checks.append(c)
        return c

    def extend(self, other: "OracleReport") -> None:
        self.checks.extend(other.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "n_checks": len(self.checks),
            "checks": [c.as_dict() for c in self.checks],
        }


def refine_argmax(evaluate: Callable[[np.ndarray], np.ndarray], spec: GridSpec) -> tuple[float, bool]:
    """Grid argmax with ``refine_rounds`` passes of 10x zoom.

    Ties go to the smaller coordinate.  Also reports whether the first pass
    peaked at the top of the search range.
    """
    lo, hi = spec.lo, spec.hi
    at_top = False
    best = lo
    for r in range(spec.refine_rounds + 1):
        x = np.linspace(lo, hi, spec.n)
        vals = evaluate(x)
        k = int(np.argmax(vals))
        best = float(x[k])
        if r == 0:
            at_top = k == spec.n - 1
        width = (hi - lo) / 10.0
        lo = best - 0.5 * width
        hi = best + 0.5 * width
        if lo < spec.lo:
            lo, hi = spec.lo, spec.lo + width
        if hi > spec.hi:
            lo, hi = spec.hi - width, spec.hi
    return best, at_top


# --------------------------------------------------------------- valuations


def _jit_terms(market: MarketParams, scenario: Scenario, lam: float) -> tuple[float, float, bool]:
    """(c0, v_out, sell) for the JIT kernels in ``scenario``."""
    p, f = market.p, market.f
    final = scenario.final_price(market)
    if scenario.sell:
        v_in, v_out = final, 1.0
        return (v_in - p * v_out) + lam * f * v_in, v_out, True
    v_in, v_out = 1.0, final
    return (v_in - v_out / p) + lam * f * v_in, v_out, False


def _trader_terms(market: MarketParams, scenario: Scenario) -> tuple[float, float]:
    """(v_recv, v_pay): trader valuations of the coin received and paid."""
    v = scenario.trader_price(market)
    return (1.0, v) if scenario.sell else (v, 1.0)


# ------------------------------------------------------------ best responses


def grid_trader_best_response(
    d_adj_p: float,
    market: MarketParams,
    lam: float | None = None,
    grid: GridSpec | None = None,
    scenario: Scenario = Scenario.US,
    e_adj_j: float | None = None,
) -> GridResult:
    """Trader's gridded optimal order against numerically responding JIT LP(s).

    ``e_adj_j`` switches to two Cournot JIT LPs with that endowment each.
    The result reports whether a JIT LP's response at the argmax is finite.
    """
    lam = market.lam if lam is None else lam
    grid = grid or GridSpec()
    scenario = Scenario(scenario)
    c0, v_out, sell = _jit_terms(market, scenario, lam)
    v_recv, v_pay = _trader_terms(market, scenario)
    competitive = e_adj_j is not None
    cap = float(e_adj_j) if competitive else math.inf
    p, f, pi = market.p, market.f, market.pi

    def evaluate(t):
        return kernels.trader_objective_grid(t, d_adj_p, p, v_recv, v_pay, f, pi, c0, v_out, sell, competitive, cap)

    t, _ = refine_argmax(evaluate, grid)
    q = d_adj_p * t / (1.0 - t) * (1.0 if sell else p)
    response = kernels.jit_response(d_adj_p, q, c0, v_out, p, sell)
    return GridResult(q, t, grid.resolution, extra={"jit_bounded": bool(math.isfinite(response)), "jit_depth": response})


def grid_jit_best_response(
    d_adj_p: float,
    q: float,
    f: float,
    lam: float = 1.0,
    grid: GridSpec | None = None,
    p: float = 1.0,
    scenario: Scenario = Scenario.US,
    market: MarketParams | None = None,
) -> GridResult:
    """JIT LP's gridded optimal deposit over pool-share coordinates s in [0, 1).

    A first-pass peak at the top of the range is reported as unbounded
    (``at_top`` set, ``value`` inf).
    """
    grid = grid or GridSpec()
    if market is None:
        market = MarketParams(f=f, p=p, zeta=1.0 + f + 1.0, zeta_u=1.0 + f + 1.0, lam=lam)
    c0, v_out, sell = _jit_terms(market, Scenario(scenario), lam)

    def evaluate(s):
        return kernels.jit_utility_grid(s, d_adj_p, q, c0, v_out, market.p, sell)

    s, at_top = refine_argmax(evaluate, grid)
    value = math.inf if at_top else d_adj_p * s / (1.0 - s)
    return GridResult(value, s, grid.resolution, at_top)


def _coord(x: float) -> float:
    return x / (1.0 + x)


# ------------------------------------------------------------------- checks


def verify_cournot_corner(params: CompetitionParams, d_adj_p: float, n: int = 200) -> OracleReport:
    """Each JIT LP's utility with the rival at its endowment peaks at the endowment."""
    rep = OracleReport()
    m = params.market
    if d_adj_p <= 0.0:
        rep.flag("cournot_corner.vacuous", True, "no passive depth; JIT LPs deposit nothing")
        return rep
    sol = cournot.solve_mu_cournot(params, d_adj_p)
    e = params.e_j_adj
    q = sol.mu * d_adj_p
    c0, v_out, sell = _jit_terms(m, Scenario.US, m.lam)
    base = d_adj_p + e
    deposits = np.linspace(0.0, e, n)
    for j in (1, 2):
        u = np.array([d / (base + d) * kernels.excess(base + d, q, c0, v_out, m.p, sell) for d in deposits])
        top = int(np.argmax(u)) == n - 1
        rep.flag(f"cournot_corner.jit{j}", top, f"argmax index {int(np.argmax(u))} of {n - 1}")
    single = kernels.jit_response(d_adj_p, q, c0, v_out, m.p, sell)
    if single > e:
        rep.checks[-1].note += "; single-arrival deposit exceeds endowment (endowment binds)"
    return rep


def _expected_passive(market: MarketParams, lam: float, d_p: float, grid: GridSpec) -> float:
    """Passive payoff from simulated play with gridded trader and numeric JIT responses."""
    pool = PoolParams.from_market(market)
    d_adj = math.sqrt(market.p) * d_p
    total = 0.0
    for sc in Scenario:
        gr = grid_trader_best_response(d_adj, market, lam, grid, sc)
        c0, v_out, sell = _jit_terms(market, sc, lam)
        dj_adj = kernels.jit_response(d_adj, gr.value, c0, v_out, market.p, sell)
        if not math.isfinite(dj_adj):
            return -math.inf
        order = SwapOrder(q_r=gr.value) if sc.sell else SwapOrder(q_s=gr.value)
        strat = Strategies(d_p, order, (dj_adj / math.sqrt(market.p),))
        hit = simulate_game(pool, market, sc, strat, (True,), lam).passive
        miss = simulate_game(pool, market, sc, strat, (False,), lam).passive
        total += sc.weight(market) * (market.pi * hit + (1.0 - market.pi) * miss)
    return total


def verify_passive_decision(market: MarketParams, lam: float | None = None, grid: GridSpec | None = None) -> OracleReport:
    """No single passive LP gains by switching between 0 and e_P / N."""
    lam = market.lam if lam is None else lam
    grid = grid or GridSpec(refine_rounds=2)
    rep = OracleReport()
    eq = baseline.solve_equilibrium(market, lam)
    share = market.e_p / market.n
    if eq.exists and eq.d_p_star > 0.0:
        stay = _expected_passive(market, lam, market.e_p, grid) / market.n
        rep.flag("passive.no_exit", stay >= -1e-12 * share, f"per-LP payoff {stay:.6e}")
    else:
        # others at zero, LP i enters alone
        enter = _expected_passive(market, lam, share, grid) if eq.exists else -math.inf
        rep.flag("passive.no_entry", enter < 0.0 or not eq.exists, f"entry payoff {enter:.6e}")
    return rep


def verify_passive_levels(params: CompetitionParams) -> OracleReport:
    """Recheck the defining inequalities of each reported participation level."""
    rep = OracleReport()
    m = params.market
    n = int(m.n)
    feasible = cournot.passive_k_equilibria(params)

    def util(k):
        try:
            return cournot.passive_utility_cournot(params, math.sqrt(m.p) * m.e_p * k / n)
        except baseline.NoNontrivialEquilibrium:
            return -math.inf

    for k in feasible:
        if k == 0:
            ok = util(1) < 0.0
        elif k == n:
            ok = util(n) > 0.0
        else:
            ok = util(k) >= 0.0 and util(k + 1) < 0.0
        rep.flag(f"passive_levels.k{k}", ok)
    return rep


def _rel_ok(a: float, b: float, rel: float = 1e-9, scale: float = 1.0) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=rel * 1e-6 * scale)


def verify_utilities(
    market: MarketParams,
    lam: float | None = None,
    competition: CompetitionParams | None = None,
    rel: float = 1e-9,
) -> OracleReport:
    """Simulated payoffs against explicit per-path utilities.

    Covers every scenario with zero, one and (with ``competition``) two JIT
    LPs, the reverse-trade restoration, and aggregation to U * p * d_adj.
    """
    lam = market.lam if lam is None else lam
    rep = OracleReport()
    eq = baseline.solve_equilibrium(market, lam)
    if not eq.exists:
        rep.flag("utilities.exists", False, "no equilibrium")
        return rep
    pool = PoolParams.from_market(market)
    p = market.p
    d_p = market.e_p  # evaluate at full participation so payoffs are nonzero
    d_adj = math.sqrt(p) * d_p
    configs = [("none", ()), ("one", (eq.nu * d_p,))]
    if competition is not None:
        e = competition.e_j
        configs.append(("two", (e, e)))
    scale = p * d_adj

    for sc in Scenario:
        mult = eq.mu_i if sc.informed else eq.mu
        q = mult * d_adj * (1.0 if sc.sell else p)
        order = SwapOrder(q_r=q) if sc.sell else SwapOrder(q_s=q)
        for label, deps in configs:
            strat = Strategies(d_p, order, tuple(deps))
            res = simulate_game(pool, market, sc, strat, None, lam)
            ref = path_utilities(market, sc, d_adj, q, [math.sqrt(p) * d for d in deps], lam)
            for agent in ("passive", "trader", "arbitrageur"):
                ok = _rel_ok(res.payoffs()[agent], ref[agent], rel, scale)
                rep.add(f"utilities.{sc.value}.{label}.{agent}", ref[agent], res.payoffs()[agent],
                        rel * max(abs(ref[agent]), 1e-6 * scale), "relative")
                rep.checks[-1].passed = ok
            for j, (a, b) in enumerate(zip(res.jit, ref["jit"])):
                rep.add(f"utilities.{sc.value}.{label}.jit{j}", b, a, rel * max(abs(b), 1e-6 * scale))
                rep.checks[-1].passed = _rel_ok(a, b, rel, scale)
            if not sc.informed:
                start, end = res.trace[0], res.trace[-1]
                ok = math.isclose(start.reserve_risky, end.reserve_risky, rel_tol=1e-12) and math.isclose(
                    start.reserve_stable, end.reserve_stable, rel_tol=1e-12
                )
                rep.flag(f"restore.{sc.value}.{label}", ok)

    if lam == 1.0:
        total = 0.0
        for sc in Scenario:
            mult = eq.mu_i if sc.informed else eq.mu
            q = mult * d_adj * (1.0 if sc.sell else p)
            order = SwapOrder(q_r=q) if sc.sell else SwapOrder(q_s=q)
            deps = () if sc.informed else (eq.nu * d_p,)
            strat = Strategies(d_p, order, deps)
            if sc.informed:
                val = simulate_game(pool, market, sc, strat, None, lam).passive
            else:
                hit = simulate_game(pool, market, sc, strat, (True,), lam).passive
                miss = simulate_game(pool, market, sc, strat, (False,), lam).passive
                val = market.pi * hit + (1.0 - market.pi) * miss
            total += sc.weight(market) * val
        closed = eq.U * p * d_adj
        rep.add("utilities.aggregate", closed, total, rel * max(abs(closed), 1e-12))

    if competition is not None and lam == 1.0:
        out = cournot.cournot_outcome(competition, d_adj, with_k=False)
        q_s = out.mu_c * p * d_adj
        strat = Strategies(d_p, SwapOrder(q_s=q_s), (competition.e_j, competition.e_j))
        res = simulate_game(pool, competition.market, Scenario.UB, strat, None, 1.0)
        depth = 1.0 + 2.0 * out.nu_hat
        branch = (out.mu_c + depth * out.mu_c / (depth + out.mu_c)) / depth * market.f * p * d_adj
        rep.add("utilities.UB.two.revenue_branch", branch, res.passive, rel * abs(branch))
    return rep


# --------------------------------------------------------------- the suite


def random_market_draws(seed: int, n: int) -> list[MarketParams]:
    """Admissible parameter sets with martingale beliefs."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        f = float(rng.uniform(0.0, 0.05))
        pi = float(rng.uniform(0.05, 1.0))
        low = baseline.zeta_lower(f, pi)
        zeta_u = float(rng.uniform(low * 1.01, low * 3.0))
        zeta = float(rng.uniform(1.0 + f, 2.0))
        if zeta <= 1.0 + f:
            continue
        alpha = float(rng.uniform(0.0, 1.0))
        out.append(MarketParams(alpha=alpha, zeta=zeta, zeta_u=zeta_u, f=f, pi=pi))
    return out


def check_draw(market: MarketParams, grid: GridSpec, nu_bar: float = 8.0, tag: str = "") -> OracleReport:
    """Grid best responses against closed forms for one parameter set."""
    rep = OracleReport()
    tol = 2.0 * grid.resolution
    d = math.sqrt(market.p) * market.e_p
    f, pi, lam = market.f, market.pi, market.lam

    # uninformed trader, sells and buys
    sol = baseline.solve_mu(f, pi, market.zeta_u, lam)
    for sc in (Scenario.US, Scenario.UB):
        gr = grid_trader_best_response(d, market, lam, grid, sc)
        rep.add(f"{tag}trader.{sc.value}", _coord(sol.mu), gr.coord, tol)
    # informed trader faces no JIT liquidity
    gr = grid_trader_best_response(d, market, lam, grid, Scenario.IS)
    rep.add(f"{tag}trader.IS", _coord(baseline.informed_multiple(market.zeta, f)), gr.coord, tol)
    # JIT response to the equilibrium order
    nu = baseline.jit_multiple(sol.mu, f, lam)
    gj = grid_jit_best_response(d, sol.mu * d, f, lam, grid, market.p, Scenario.US, market)
    rep.add(f"{tag}jit.US", _coord(nu), gj.coord, tol)

    # Cournot single arrival
    comp = CompetitionParams(market, e_j=nu_bar * market.e_p)
    csol = cournot.solve_mu_cournot(comp, d)
    gc = grid_trader_best_response(d, market, lam, grid, Scenario.US, comp.e_j_adj)
    rep.add(f"{tag}cournot.trader", _coord(csol.mu), gc.coord, tol)
    if csol.mu > lam * f:
        nu_c = baseline.jit_multiple(csol.mu, f, lam)
        gjc = grid_jit_best_response(d, csol.mu * d, f, lam, grid, market.p, Scenario.US, market)
        rep.add(f"{tag}cournot.jit_single", _coord(nu_c), gjc.coord, tol)
    return rep


def run_oracle_suite(
    seed: int = DEFAULT_SEED,
    draws: int = 20,
    grid: GridSpec | None = None,
    corner: CompetitionParams | None = None,
) -> OracleReport:
    grid = grid or GridSpec()
    rep = OracleReport(seed=seed)
    for i, m in enumerate(random_market_draws(seed, draws)):
        rep.extend(check_draw(m, grid, tag=f"draw{i:02d}."))
    corner = corner or CompetitionParams(MarketParams(f=0.01, pi=0.5, zeta_u=1.2), e_j=3.0)
    rep.extend(verify_cournot_corner(corner, math.sqrt(corner.market.p) * corner.market.e_p))
    rep.extend(verify_utilities(MarketParams(), 1.0, CompetitionParams(MarketParams(), e_j=3.0)))
    rep.extend(verify_passive_decision(MarketParams()))
    return rep
