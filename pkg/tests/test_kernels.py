import json
import os
import subprocess
import sys

import numpy as np
import pytest

from jitliq import kernels
from jitliq._accel import NUMBA_ENABLED

needs_numba = pytest.mark.skipif(not NUMBA_ENABLED, reason="numba path disabled")
GRID = np.linspace(0.0, 1.0 - 1e-9, 401)


@needs_numba
@pytest.mark.parametrize("sell", [True, False])
def test_jit_grid_twins_agree(sell):
    args = (1.0, 0.02, 0.003 if sell else 0.004, 1.0 if sell else 0.9, 1.3, sell)
    a = kernels._jit_utility_grid_nb(GRID, *args)
    b = kernels._jit_utility_grid_np(GRID, *args)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


@needs_numba
@pytest.mark.parametrize("competitive,cap", [(False, np.inf), (True, 3.0), (True, 1e-3)])
@pytest.mark.parametrize("sell", [True, False])
def test_trader_grid_twins_agree(sell, competitive, cap):
    args = (1.0, 1.0, 1.0, 0.98, 0.003, 0.6, 0.003 + 0.01, 1.0, sell, competitive, cap)
    a = kernels._trader_grid_nb(GRID, *args)
    b = kernels._trader_grid_np(GRID, *args)
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-13)


def test_jit_response_is_stationary():
    base, q, c0 = 1.0, 0.02, 0.0031
    d = kernels.jit_response(base, q, c0, 1.0, 1.0, True)
    assert np.isfinite(d) and d > 0
    assert abs(kernels.jit_marginal(base + d, base, q, c0, 1.0, 1.0, True)) < 1e-9


def test_solve_foc_reports_bracket_failure():
    # targets above the marginal at zero have no root
    assert kernels.solve_foc(2.0, 0.003, 1.0, 1.0, 0.0, False)[1] == -1


def test_numpy_fallback_matches_in_subprocess():
    code = (
        "import json; from jitliq import oracle, _accel;"
        "from jitliq.params import MarketParams;"
        "g = oracle.GridSpec(n=801);"
        "r = oracle.grid_trader_best_response(1.0, MarketParams(), 1.0, g);"
        "print(json.dumps([_accel.NUMBA_ENABLED, r.coord]))"
    )
    out = {}
    for flag in ("0", "1"):
        env = {**os.environ, "JITLIQ_NUMBA": flag}
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[flag] = json.loads(res.stdout)
    assert out["0"][0] is False
    assert out["0"][1] == pytest.approx(out["1"][1], abs=1e-9)
