"""Hot numeric kernels.

Scalar kernels (first-order conditions, bisection, JIT depth response) are
compiled with numba when enabled and run as plain Python otherwise.  The grid
evaluators used by the brute-force oracle have two implementations: a
compiled loop and a vectorised numpy twin.  ``JITLIQ_NUMBA=0`` selects numpy.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

MU_LO = 1e-12
MU_XTOL = 1e-13
MAX_ITER = 200
SHARE_CAP = 1.0 - 1e-12


# ---------------------------------------------------------------- trader FOC


@njit(cache=True)
def foc_value(mu, f, pi, lam, nu_hat, competitive):
    """Marginal trader payoff per unit of input, as a function of the multiple."""
    inv = 1.0 / ((1.0 + mu) * (1.0 + mu))
    single = (2.0 + mu) * math.sqrt((1.0 + lam * f) * (1.0 + mu)) * inv
    if not competitive:
        return (1.0 - pi) * inv + 0.5 * pi * single
    depth = 1.0 + 2.0 * nu_hat
    both = depth * depth / ((depth + mu) * (depth + mu))
    return (1.0 - pi) * (1.0 - pi) * inv + pi * (1.0 - pi) * single + pi * pi * both


@njit(cache=True)
def solve_foc(target, f, pi, lam, nu_hat, competitive):
    """Bisection for foc_value(mu) == target on a decreasing branch.

    Returns (mu, iterations); iterations is -1 when no bracket exists.
    """
    lo = MU_LO
    if foc_value(lo, f, pi, lam, nu_hat, competitive) <= target:
        return math.nan, -1
    hi = 1.0
    grow = 0
    while foc_value(hi, f, pi, lam, nu_hat, competitive) >= target:
        lo = hi
        hi *= 2.0
        grow += 1
        if grow > MAX_ITER:
            return math.nan, -1
    it = 0
    while hi - lo > MU_XTOL and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if foc_value(mid, f, pi, lam, nu_hat, competitive) > target:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it


# ------------------------------------------------------- JIT depth response
#
# A JIT LP joining a pool whose other liquidity has price-adjusted depth
# ``base`` earns  (1 - base/D) * excess(D)  where D is the total depth and
# excess is the value of the fee-inclusive input minus the value of the output.
# ``c0`` folds the input valuation, output valuation and retained fee:
#   sells: c0 = v_in - p*v_out + lam*f*v_in
#   buys:  c0 = v_in - v_out/p + lam*f*v_in


@njit(cache=True)
def excess(depth, q, c0, v_out, p, sell):
    if sell:
        return q * (c0 + v_out * p * q / (depth + q))
    return q * (c0 + (v_out / p) * q / (p * depth + q))


@njit(cache=True)
def excess_slope(depth, q, v_out, p, sell):
    if sell:
        return -v_out * p * q * q / ((depth + q) * (depth + q))
    return -v_out * q * q / ((p * depth + q) * (p * depth + q))


@njit(cache=True)
def jit_marginal(depth, base, q, c0, v_out, p, sell):
    return (base / (depth * depth)) * excess(depth, q, c0, v_out, p, sell) + (
        1.0 - base / depth
    ) * excess_slope(depth, q, v_out, p, sell)


@njit(cache=True)
def jit_response(base, q, c0, v_out, p, sell):
    """Utility-maximising deposit; inf when utility keeps rising."""
    if q <= 0.0 or base <= 0.0:
        return 0.0
    if jit_marginal(base, base, q, c0, v_out, p, sell) <= 0.0:
        return 0.0
    if jit_marginal(base / (1.0 - SHARE_CAP), base, q, c0, v_out, p, sell) > 0.0:
        return math.inf
    lo = 0.0
    hi = SHARE_CAP
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if jit_marginal(base / (1.0 - mid), base, q, c0, v_out, p, sell) > 0.0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    return base * s / (1.0 - s)


@njit(cache=True)
def swap_out(q, depth, p, sell):
    """Output of a swap against a full-range pool; depth may be inf."""
    if math.isinf(depth):
        return p * q if sell else q / p
    if sell:
        return p * depth * q / (depth + q)
    return depth * q / (p * depth + q)


@njit(cache=True)
def pair_response(base, q, c0, v_out, p, sell, cap):
    """Both JIT LPs present: iterate capped best responses to a fixed point."""
    d1 = 0.0
    d2 = 0.0
    for _ in range(100):
        n1 = min(jit_response(base + d2, q, c0, v_out, p, sell), cap)
        n2 = min(jit_response(base + n1, q, c0, v_out, p, sell), cap)
        if n1 == d1 and n2 == d2:
            break
        d1 = n1
        d2 = n2
    return d1 + d2


# ------------------------------------------------------------ grid kernels


@njit(cache=True)
def _jit_utility_grid_nb(s, base, q, c0, v_out, p, sell):
    out = np.empty(s.shape[0])
    for i in range(s.shape[0]):
        depth = base / (1.0 - s[i])
        out[i] = s[i] * excess(depth, q, c0, v_out, p, sell)
    return out


def _jit_utility_grid_np(s, base, q, c0, v_out, p, sell):
    depth = base / (1.0 - s)
    if sell:
        ex = q * (c0 + v_out * p * q / (depth + q))
    else:
        ex = q * (c0 + (v_out / p) * q / (p * depth + q))
    return s * ex


@njit(cache=True)
def _trader_grid_nb(t, base, p, v_recv, v_pay, f, pi, c0, v_out, sell, competitive, cap):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        q = base * t[i] / (1.0 - t[i])
        if not sell:
            q *= p
        single = base + jit_response(base, q, c0, v_out, p, sell)
        alone = swap_out(q, base, p, sell)
        one = swap_out(q, single, p, sell)
        if competitive:
            two = swap_out(q, base + pair_response(base, q, c0, v_out, p, sell, cap), p, sell)
            got = (1.0 - pi) ** 2 * alone + 2.0 * pi * (1.0 - pi) * one + pi * pi * two
        else:
            got = (1.0 - pi) * alone + pi * one
        out[i] = v_recv * got - v_pay * (1.0 + f) * q
    return out


def _jit_response_vec(base, q, c0, v_out, p, sell):
    """numpy twin of ``jit_response`` over arrays of base and q."""
    base = np.asarray(base, dtype=float)
    q = np.asarray(q, dtype=float)
    base, q = np.broadcast_arrays(base, q)

    def marginal(depth):
        if sell:
            ex = q * (c0 + v_out * p * q / (depth + q))
            slope = -v_out * p * q * q / (depth + q) ** 2
        else:
            ex = q * (c0 + (v_out / p) * q / (p * depth + q))
            slope = -v_out * q * q / (p * depth + q) ** 2
        return (base / depth**2) * ex + (1.0 - base / depth) * slope

    with np.errstate(divide="ignore", invalid="ignore"):
        valid = (q > 0.0) & (base > 0.0)
        enter = valid & (marginal(base) > 0.0)
        unbounded = enter & (marginal(base / (1.0 - SHARE_CAP)) > 0.0)
        lo = np.zeros_like(base)
        hi = np.full_like(base, SHARE_CAP)
        for _ in range(MAX_ITER):
            mid = 0.5 * (lo + hi)
            up = marginal(base / (1.0 - mid)) > 0.0
            lo = np.where(up, mid, lo)
            hi = np.where(up, hi, mid)
        s = 0.5 * (lo + hi)
        out = np.where(enter, base * s / (1.0 - s), 0.0)
    return np.where(unbounded, np.inf, out)


def _swap_out_vec(q, depth, p, sell):
    with np.errstate(invalid="ignore", divide="ignore"):
        if sell:
            finite = p * depth * q / (depth + q)
            return np.where(np.isinf(depth), p * q, finite)
        finite = depth * q / (p * depth + q)
        return np.where(np.isinf(depth), q / p, finite)


def _trader_grid_np(t, base, p, v_recv, v_pay, f, pi, c0, v_out, sell, competitive, cap):
    q = base * t / (1.0 - t)
    if not sell:
        q = q * p
    base_arr = np.full_like(q, base)
    alone = _swap_out_vec(q, base_arr, p, sell)
    one = _swap_out_vec(q, base_arr + _jit_response_vec(base_arr, q, c0, v_out, p, sell), p, sell)
    if competitive:
        d1 = np.zeros_like(q)
        d2 = np.zeros_like(q)
        for _ in range(100):
            n1 = np.minimum(_jit_response_vec(base + d2, q, c0, v_out, p, sell), cap)
            n2 = np.minimum(_jit_response_vec(base + n1, q, c0, v_out, p, sell), cap)
            done = np.array_equal(n1, d1) and np.array_equal(n2, d2)
            d1, d2 = n1, n2
            if done:
                break
        two = _swap_out_vec(q, base + d1 + d2, p, sell)
        got = (1.0 - pi) ** 2 * alone + 2.0 * pi * (1.0 - pi) * one + pi * pi * two
    else:
        got = (1.0 - pi) * alone + pi * one
    return v_recv * got - v_pay * (1.0 + f) * q


def jit_utility_grid(s, base, q, c0, v_out, p, sell):
    """JIT utility on a grid of pool-share coordinates s in [0, 1)."""
    s = np.ascontiguousarray(s, dtype=np.float64)
    if NUMBA_ENABLED:
        return _jit_utility_grid_nb(s, base, q, c0, v_out, p, sell)
    return _jit_utility_grid_np(s, base, q, c0, v_out, p, sell)


def trader_objective_grid(t, base, p, v_recv, v_pay, f, pi, c0, v_out, sell, competitive=False, cap=math.inf):
    """Trader expected payoff on a grid of coordinates t = q / (base + q).

    For buys q is in stable coins and the coordinate is q / (p * base + q).

    JIT LPs respond to each candidate order with their numerically located
    best deposit; in the competitive case both-arrive deposits come from
    capped best-response iteration.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)
    args = (base, p, v_recv, v_pay, f, pi, c0, v_out, sell, competitive, cap)
    if NUMBA_ENABLED:
        return _trader_grid_nb(t, *args)
    return _trader_grid_np(t, *args)


def warmup() -> None:
    """Trigger compilation of every kernel once."""
    foc_value(0.1, 0.003, 1.0, 1.0, 0.0, False)
    solve_foc(0.98, 0.003, 1.0, 1.0, 1.0, True)
    grid = np.linspace(0.0, 0.5, 3)
    jit_utility_grid(grid, 1.0, 0.02, 0.003, 1.0, 1.0, True)
    trader_objective_grid(grid, 1.0, 1.0, 1.0, 0.98, 0.003, 0.5, 0.003, 1.0, True, True, 3.0)
