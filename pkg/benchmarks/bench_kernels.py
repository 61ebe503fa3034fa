"""Time the hot kernels with numba on and off.

Each variant runs in its own interpreter because the switch is read at import.
Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from jitliq import kernels, oracle, baseline
from jitliq.params import CompetitionParams, MarketParams

repeat = int(sys.argv[1])
t0 = time.perf_counter()
kernels.warmup()
warm = time.perf_counter() - t0

def best(fn):
    times = []
    for _ in range(repeat):
        s = time.perf_counter()
        fn()
        times.append(time.perf_counter() - s)
    return min(times)

m = MarketParams()
comp = CompetitionParams(MarketParams(f=0.01, pi=0.5, zeta_u=1.2), e_j=3.0)
out = {
    "warmup_s": warm,
    "trader_grid_s": best(lambda: oracle.grid_trader_best_response(1.0, m)),
    "cournot_trader_grid_s": best(lambda: oracle.grid_trader_best_response(1.0, comp.market, e_adj_j=3.0)),
    "jit_grid_s": best(lambda: oracle.grid_jit_best_response(1.0, 0.0185, 0.003, market=m)),
    "solve_mu_x1000_s": best(lambda: [baseline.solve_mu(0.003, 1.0, 1.02 + 1e-4 * i) for i in range(1000)]),
}
print(json.dumps(out))
"""


def run(flag: str, repeat: int) -> dict:
    env = {**os.environ, "JITLIQ_NUMBA": flag}
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nb, np_ = run("1", args.repeat), run("0", args.repeat)
    print(f"{'workload':<24}{'numba':>12}{'numpy':>12}{'ratio':>9}")
    for key in nb:
        ratio = np_[key] / nb[key] if nb[key] > 0 else float("nan")
        print(f"{key:<24}{nb[key]:>12.4f}{np_[key]:>12.4f}{ratio:>9.1f}")


if __name__ == "__main__":
    main()
