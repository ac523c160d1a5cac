"""Time the allocation kernels and a short simulation with and without numba.

Each mode runs in its own interpreter because the switch is read at import
time.  Usage::

    python benchmarks/bench_kernels.py --rounds 2000 --repeat 3
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from wptfair import NUMBA_ENABLED
from wptfair import kernels as K
from wptfair.simulator import SimConfig, run

rounds, repeat = int(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
n = 8
a = np.where(rng.random(n) < 0.5, 0.0319, 0.2411)
b = np.where(a == 0.0319, 3.6169, 0.4566)
lam = 1e-3 * rng.uniform(5, 15, n) ** -3 * rng.gamma(4, 1, n)
u = rng.uniform(0, 1e-3, n)
cap = np.minimum(3e-3 / lam, 4.0)
h = np.full(n, 0.08)

def best(fn):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

calls = 2000
out = {"numba": NUMBA_ENABLED}
out["trpm_us"] = best(lambda: [K.trpm_kernel(a, b, lam, cap, 4.0) for _ in range(calls)]) / calls * 1e6
out["crpm_us"] = best(lambda: [K.crpm_kernel(a, b, lam, u, cap, 4.0, 1e-9, 200, n)
                               for _ in range(calls)]) / calls * 1e6
out["lcrpm_us"] = best(lambda: [K.lcrpm_kernel(h, lam, u, cap, 4.0, False, n)
                                for _ in range(calls)]) / calls * 1e6
cfg = SimConfig(iterations=rounds, seed=1)
out["sim_s"] = best(lambda: run(cfg))
json.dump(out, sys.stdout)
"""


def measure(disable, rounds, repeat):
    env = dict(os.environ)
    env.pop("WPTFAIR_DISABLE_NUMBA", None)
    if disable:
        env["WPTFAIR_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(rounds), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=2000, help="simulation rounds per timing")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    jit = measure(False, args.rounds, args.repeat)
    ref = measure(True, args.rounds, args.repeat)
    print(f"{'metric':<12}{'numba':>14}{'numpy':>14}{'speedup':>10}")
    for key, unit in (("trpm_us", "us"), ("crpm_us", "us"), ("lcrpm_us", "us"), ("sim_s", "s")):
        print(f"{key:<12}{jit[key]:>12.3g}{unit:>2}{ref[key]:>12.3g}{unit:>2}"
              f"{ref[key] / jit[key]:>9.1f}x")
    if not jit["numba"]:
        print("note: numba unavailable, both columns used the numpy path")


if __name__ == "__main__":
    main()
