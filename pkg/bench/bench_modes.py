"""Compare the compiled kernels against the pure-numpy fallback.

Runs the same workload in two fresh interpreters, one with
DIRGEO_DISABLE_NUMBA=1, and reports wall times.  Timing starts after a
warmup pass inside each subprocess, so jit compilation is reported
separately rather than folded into the workload numbers.

Usage: python bench/bench_modes.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKLOAD = """
import json
import time

import numpy as np

import dirgeo
from dirgeo.curvature import curvature_grid
from dirgeo.families import family, superadditive_gap
from dirgeo.geodesics import geodesic_ivp
from dirgeo.geometry import metric, norm

mf = family("trigamma")

def workload():
    rng = np.random.default_rng(7)
    for _ in range(20):
        x0 = np.exp(rng.uniform(-1.5, 1.5, 3))
        v0 = rng.standard_normal(3)
        v0 /= norm(metric(mf, x0), v0)  # unit speed keeps runs comparable
        geodesic_ivp(mf, x0, v0, 5.0, samples=11)
    curvature_grid(mf, 1e-2, 1e2, 60)
    for _ in range(2000):
        superadditive_gap(mf, np.exp(rng.uniform(-6.9, 6.9, 4)))

t0 = time.perf_counter()
workload()
compile_and_first = time.perf_counter() - t0

times = []
for _ in range(REPEAT):
    t0 = time.perf_counter()
    workload()
    times.append(time.perf_counter() - t0)

print(json.dumps({
    "numba": dirgeo.NUMBA_ENABLED,
    "first": compile_and_first,
    "best": min(times),
    "mean": sum(times) / len(times),
}))
"""


def run_mode(disable, repeat):
    env = dict(os.environ)
    env["DIRGEO_DISABLE_NUMBA"] = "1" if disable else "0"
    src = _WORKLOAD.replace("REPEAT", str(repeat))
    out = subprocess.run(
        [sys.executable, "-c", src], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(out.returncode)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timed passes per mode")
    args = ap.parse_args()

    fast = run_mode(disable=False, repeat=args.repeat)
    slow = run_mode(disable=True, repeat=args.repeat)
    if not fast["numba"]:
        print("note: numba unavailable, both rows ran the fallback path")

    print(f"{'mode':<10} {'first (s)':>10} {'best (s)':>10} {'mean (s)':>10}")
    for label, r in (("numba", fast), ("fallback", slow)):
        print(f"{label:<10} {r['first']:>10.3f} {r['best']:>10.3f} {r['mean']:>10.3f}")
    if fast["best"] > 0:
        print(f"speedup (best): {slow['best'] / fast['best']:.1f}x")


if __name__ == "__main__":
    main()
