import math

import numpy as np
import pytest

from jitliq import baseline as b
from jitliq import cournot as c
from jitliq.amm import PoolParams, Scenario, Strategies, SwapOrder, simulate_game
from jitliq.params import CompetitionParams, MarketParams


def test_nu_hat():
    assert c.nu_hat(0.0, 3.0) == 0.0
    assert c.nu_hat(1.0, 3.0) == 3.0
    cp = CompetitionParams(MarketParams(p=4.0, e_p=2.0), e_j=6.0)
    assert c.nu_hat(math.sqrt(4.0) * 2.0, cp.e_j_adj) == pytest.approx(cp.nu_bar)


def test_cournot_foc_examples():
    assert c.cournot_foc(0.4, 0.01, 0.0, 3.0) == b.trader_foc(0.4, 0.01, 0.0)
    pi, f = 0.3, 0.0
    assert c.cournot_foc(0.0, f, pi, 2.0) == pytest.approx(1.0, rel=1e-15)
    lim = c.cournot_foc(0.2, 0.01, 0.5, 1e9)
    single = 0.5 * 0.5 * (2.2) * math.sqrt(1.01 * 1.2) / 1.2**2
    assert lim == pytest.approx(0.25 / 1.44 + single + 0.25, rel=1e-8)


def test_solve_mu_cournot_reductions():
    m = MarketParams(f=0.01, pi=0.0, zeta_u=1.2)
    cp = CompetitionParams(m, e_j=3.0)
    assert abs(c.solve_mu_cournot(cp, 1.0).mu - (math.sqrt(1.2 / 1.01) - 1)) <= 1e-10
    m1 = MarketParams(f=0.01, pi=1.0, zeta_u=1.2)
    cp1 = CompetitionParams(m1, e_j=3.0)
    expect = 7.0 * (math.sqrt(1.2 / 1.01) - 1)
    assert c.solve_mu_cournot(cp1, 1.0).mu == pytest.approx(expect, rel=1e-11)


def test_mu_c_dominates_monopolist():
    for f in (0.003, 0.01, 0.03):
        for pi in (0.2, 0.5, 0.9):
            for k in (1.05, 1.5, 2.5):
                zu = b.zeta_lower(f, pi) * k
                m = MarketParams(f=f, pi=pi, zeta_u=zu)
                assert c.solve_mu_cournot(CompetitionParams(m, e_j=50.0), 1.0).mu >= b.solve_mu(f, pi, zu).mu


def test_single_arrival_substitution_reproduces_threshold():
    for f in (0.001, 0.01, 0.05):
        for lam in (0.0, 0.3, 1.0):
            assert abs(c.single_arrival_threshold(f, lam) - b.zeta_lower_lambda(f, lam, 1.0)) <= 1e-10


def test_outcome_structure(competition):
    out = c.cournot_outcome(competition, 1.0)
    assert out.both_deposit == competition.e_j_adj
    assert out.nu_hat == 3.0
    assert out.assumption2_ok
    assert out.single_deposit == pytest.approx(out.nu_c)
    assert out.R_comp > 0


def test_outcome_pi_zero_matches_no_jit():
    m = MarketParams(f=0.01, pi=0.0, zeta_u=1.2)
    out = c.cournot_outcome(CompetitionParams(m, e_j=3.0), 1.0)
    assert out.R_comp == pytest.approx(b.no_jit_revenue(1.2, 0.01), rel=1e-10)


def test_pi_one_revenue_matches_simulation():
    m = MarketParams(f=0.01, pi=1.0, zeta_u=1.2)
    cp = CompetitionParams(m, e_j=3.0)
    out = c.cournot_outcome(cp, 1.0, with_k=False)
    pool = PoolParams.from_market(m)
    res = simulate_game(pool, m, Scenario.US, Strategies(1.0, SwapOrder(q_r=out.mu_c), (3.0, 3.0)))
    assert res.passive == pytest.approx(out.R_comp, rel=1e-9)


def test_binding_endowment_warning():
    m = MarketParams(f=0.01, pi=0.5, zeta_u=1.2)
    out = c.cournot_outcome(CompetitionParams(m, e_j=0.1), 1.0, with_k=False)
    assert not out.assumption2_ok and out.warnings


def test_passive_levels():
    base = MarketParams(f=0.01, pi=0.5, zeta_u=1.2, zeta=1.2, n=4)
    assert c.passive_k_equilibria(CompetitionParams(base.with_(alpha=0.0), e_j=3.0)) == [4]
    assert c.passive_k_equilibria(CompetitionParams(base.with_(alpha=1.0), e_j=3.0)) == [0]
    tuned = CompetitionParams(base.with_(alpha=0.1935), e_j=3.0)
    assert c.passive_k_equilibria(tuned) == [2]
    u2 = c.passive_utility_cournot(tuned, 0.5)
    u3 = c.passive_utility_cournot(tuned, 0.75)
    assert u2 >= 0.0 > u3


def test_cournot_dampening():
    m = MarketParams(f=0.01, pi=0.5, zeta_u=1.2)
    nus = []
    for lam in np.linspace(0, 1, 11):
        cp = CompetitionParams(m.with_(lam=float(lam)), e_j=3.0)
        out = c.cournot_outcome(cp, 1.0, with_k=False)
        assert out.nu_hat == 3.0
        nus.append(out.nu_c)
    assert all(x <= y for x, y in zip(nus, nus[1:]))


def test_two_tier_reduces_at_lambda_one():
    m = MarketParams(f=0.01, pi=0.5, zeta_u=1.2)
    a = c.cournot_outcome(CompetitionParams(m, e_j=3.0), 1.0, with_k=False)
    r = c.cournot_revenue(a.mu_c, a.nu_c, a.nu_hat, 0.5, 0.01, 1.0)
    assert r == a.R_comp
