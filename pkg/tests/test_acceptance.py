"""The eight acceptance criteria, each timed after kernel warm-up."""

import math
import time

import numpy as np

from conftest import ACCEPTANCE
from jitliq import baseline as b
from jitliq import cournot as c
from jitliq import fee_tier as ft
from jitliq import oracle as o
from jitliq import thresholds as t
from jitliq.amm import PoolParams, Scenario, Strategies, SwapOrder, simulate_game
from jitliq.params import CompetitionParams, MarketParams
from jitliq.utilities import path_utilities


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE[n] = line
    print(line)
    assert ok, line


def test_1_crowding_threshold():
    t0 = time.perf_counter()
    res = t.zeta_star(0.03, 1.0)
    dt = time.perf_counter() - t0
    closed = (math.sqrt(0.03) + math.sqrt(1.03)) ** 2
    ok = abs(res.value - 1.41157) <= 1e-4 and abs(res.value - closed) <= 1e-6 and dt < 1.0
    record(1, ok, f"zeta*={res.value:.10f} closed={closed:.10f} t={dt:.3f}s")


def test_2_optimal_transfer_rate():
    m = MarketParams(alpha=0.1, zeta=1.05, zeta_u=1.02, f=0.003, pi=1.0)
    t0 = time.perf_counter()
    rep = ft.fee_design_report(m)
    dt = time.perf_counter() - t0
    lam = rep.lambda_star
    below, above = ft.passive_utility(m, lam - 0.01), ft.passive_utility(m, lam + 0.01)
    ok = abs(lam - 0.815) <= 0.01 and below >= 0.0 and above < 0.0 and dt < 5.0
    record(2, ok, f"lambda*={lam:.7f} U(-0.01)={below:.3e} U(+0.01)={above:.3e} t={dt:.2f}s")


def test_3_oracle_equivalence():
    t0 = time.perf_counter()
    rep = o.run_oracle_suite(draws=20)
    dt = time.perf_counter() - t0
    gaps = [ch.abs_gap / ch.tolerance for ch in rep.checks if ch.tolerance > 0 and "draw" in ch.name]
    corner = [ch for ch in rep.checks if ch.name.startswith("cournot_corner")]
    ok = rep.passed and o.GridSpec().resolution * 2 <= 1e-6 and all(ch.passed for ch in corner) and dt < 60
    record(3, ok, f"{len(rep.checks)} checks, worst gap/tol={max(gaps):.3f}, t={dt:.1f}s")


def test_4_simulation_equivalence():
    worst, restored = 0.0, True
    m = MarketParams()
    eq = b.solve_equilibrium(m)
    pool = PoolParams.from_market(m)
    for sc in Scenario:
        mult = eq.mu_i if sc.informed else eq.mu
        order = SwapOrder(q_r=mult) if sc.sell else SwapOrder(q_s=mult)
        for deps in ((), (eq.nu,), (3.0, 3.0)):
            res = simulate_game(pool, m, sc, Strategies(1.0, order, deps))
            ref = path_utilities(m, sc, 1.0, mult, list(deps), 1.0)
            pairs = [(res.payoffs()[k], ref[k]) for k in ("passive", "trader", "arbitrageur")]
            pairs += list(zip(res.jit, ref["jit"]))
            for a, r in pairs:
                worst = max(worst, abs(a - r) / max(abs(r), 1e-300))
            if not sc.informed:
                s, e = res.trace[0], res.trace[-1]
                restored &= math.isclose(s.reserve_risky, e.reserve_risky, rel_tol=1e-12)
                restored &= math.isclose(s.reserve_stable, e.reserve_stable, rel_tol=1e-12)
    rep = o.verify_utilities(m, 1.0, CompetitionParams(m, e_j=3.0))
    ok = worst <= 1e-9 and restored and rep.passed
    record(4, ok, f"max rel err={worst:.2e}, reserves restored={restored}, oracle checks={len(rep.checks)}")


def test_5_structural_identities():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        f, pi, lam = rng.uniform(0, 0.05), rng.uniform(0.05, 1), rng.uniform(0, 1)
        zu = b.zeta_lower_lambda(f, lam, pi) * rng.uniform(1.01, 3)
        mu = b.solve_mu(f, pi, zu, lam).mu
        nu = b.jit_multiple(mu, f, lam)
        worst = max(worst, abs((1 + mu / (1 + nu)) ** 2 - (1 + mu) / (1 + lam * f)))
    m = MarketParams()
    reduce_ok = b.solve_equilibrium(m.with_(lam=0.3), 1.0).as_dict() == b.solve_equilibrium(m).as_dict()
    pi0 = max(
        abs(b.solve_mu(f, 0.0, zu).mu - (math.sqrt(zu / (1 + f)) - 1))
        for f in (0.0, 0.003, 0.03)
        for zu in (1.05, 1.2, 2.0)
    )
    zl = max(abs(b.zeta_lower_lambda(f, 1.0, pi) - b.zeta_lower(f, pi)) for f in (0.001, 0.01, 0.05) for pi in (0.1, 0.5, 1.0))
    ok = worst <= 1e-9 and reduce_ok and pi0 <= 1e-10 and zl <= 1e-12
    record(5, ok, f"identity err={worst:.1e}, lambda=1 reduction={reduce_ok}, pi=0 err={pi0:.1e}, zeta_lower err={zl:.1e}")


def test_6_monotonicity():
    pis = np.linspace(0, 1, 41)
    lams = np.linspace(0, 1, 41)
    ok_pi = ok_lam = ok_c = ok_g = True
    for f in (0.001, 0.003, 0.01, 0.03):
        for zu in (1.05, 1.2, 1.5):
            # existence thresholds rise in pi and lambda, so admissible points form a prefix
            mus = [b.solve_mu(f, float(pi), zu).mu for pi in pis if zu > b.zeta_lower(f, pi)]
            ok_pi &= all(x <= y for x, y in zip(mus, mus[1:]))
            admissible = [float(lam) for lam in lams if zu > b.zeta_lower_lambda(f, lam, 0.7)]
            pairs = [(s.mu, b.jit_multiple(s.mu, f, lam)) for lam in admissible for s in [b.solve_mu(f, 0.7, zu, lam)]]
            ok_lam &= all(a[0] <= b_[0] and a[1] <= b_[1] * (1 + 1e-12) for a, b_ in zip(pairs, pairs[1:]))
            for pi in (0.2, 0.5, 0.9):
                if zu <= b.zeta_lower(f, pi):
                    continue
                cp = CompetitionParams(MarketParams(f=f, pi=pi, zeta_u=zu), e_j=3.0)
                for d in (0.1, 0.5, 1.0):
                    ok_c &= c.solve_mu_cournot(cp, d).mu >= b.solve_mu(f, pi, zu).mu
                    zc = t.zeta_star_cournot(cp, d)
                    if zc.kind is t.ThresholdKind.THRESHOLD:
                        ok_c &= zc.value <= t.zeta_star(f, pi).value
        for pi in (0.1, 0.5, 1.0):
            mus = np.linspace(f * (1 + 1e-6), f + 3.0, 1000)
            g = [t.g_monopoly(x, f, pi) for x in mus]
            ok_g &= all(x < y for x, y in zip(g, g[1:]))
    ok = ok_pi and ok_lam and ok_c and ok_g
    record(6, ok, f"mu(pi)={ok_pi} mu,nu(lambda)={ok_lam} competition={ok_c} G={ok_g}")


def test_7_competitive_region():
    base = MarketParams(f=0.01, pi=0.5, zeta_u=1.2)
    t0 = time.perf_counter()
    only_c = reverse = 0
    lo = b.zeta_lower(0.01, 0.5) * 1.001
    for d in np.linspace(0.05, 1.0, 20):
        for zu in np.linspace(lo, 1.3, 30):
            cp = CompetitionParams(base.with_(zeta_u=float(zu)), e_j=3.0)
            try:
                cc = t.classify_cournot(cp, float(d))
            except b.NoNontrivialEquilibrium:
                continue
            mc = t.classify(cp.market)
            only_c += cc is b.Classification.COMPLEMENT and mc is b.Classification.CROWD_OUT
            reverse += cc is b.Classification.CROWD_OUT and mc is b.Classification.COMPLEMENT
    dt = time.perf_counter() - t0
    ok = only_c > 0 and reverse == 0 and dt < 60
    record(7, ok, f"cournot-only complement cells={only_c}, reverse cells={reverse}, t={dt:.1f}s")


PAIRS = [(0.001, 0.2), (0.003, 1.0), (0.01, 0.5), (0.03, 0.8), (0.05, 0.3)]


def test_8_freeze_prevention():
    lams = np.linspace(0, 1, 21)
    results = []
    for f, pi in PAIRS:
        zu = 1.01 * max(ft.zeta_hat(f, pi), b.zeta_lower_lambda(f, 0.0, pi))
        m = MarketParams(f=f, pi=pi, zeta=1.2, zeta_u=zu)
        us = [ft.passive_utility(m, float(lam)) for lam in lams]
        results.append(all(x > y for x, y in zip(us, us[1:])))
    record(8, all(results), f"strictly decreasing U(lambda) for {sum(results)}/{len(PAIRS)} (f, pi) pairs")
