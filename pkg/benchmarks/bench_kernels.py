"""Numba vs pure-numpy kernel timings on the bundled large-scale scenario.

    python benchmarks/bench_kernels.py [--repeat 20] [--batch 180] [--solve]

``--solve`` also times one full search per backend in a subprocess (the
backend is fixed at import time by CAMCOVER_DISABLE_NUMBA).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from camcover import kernels
from camcover._accel import HAS_NUMBA
from camcover.scenario import load_scenario


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def time_solve(disable):
    code = (
        "import time; from camcover.scenario import load_scenario; from camcover.optimizer import run_iwpa;"
        "s = load_scenario('large'); s.features_array(); t = time.perf_counter();"
        "r = run_iwpa(s, s.params.with_overrides(seed=7)); print(time.perf_counter() - t, r.fitness)"
    )
    env = dict(os.environ, CAMCOVER_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    secs, fit = out.stdout.split()
    return float(secs), int(fit)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--batch", type=int, default=180, help="genomes per batch (one wandering sweep is 180)")
    ap.add_argument("--solve", action="store_true")
    args = ap.parse_args()

    scen = load_scenario("large")
    pts = scen.features_array()
    intr = scen.intrinsics
    rng = np.random.default_rng(0)
    genomes = scen.space.sample(rng, args.batch)
    kw = (intr.d_min, intr.d_max, intr.half_angle, kernels.DEFAULT_EPS_ANGLE)

    print(f"points={len(pts)} cameras={scen.N} batch={args.batch}")
    t_np = best_of(lambda: kernels._batch_cost_np(genomes, pts, *kw), args.repeat)
    print(f"batch_cost numpy : {t_np * 1e3:8.2f} ms  ({t_np / args.batch * 1e6:7.1f} us/genome)")
    if HAS_NUMBA:
        kernels._batch_cost_nb(genomes[:1], pts, *kw)  # compile
        t_nb = best_of(lambda: kernels._batch_cost_nb(genomes, pts, *kw), args.repeat)
        print(f"batch_cost numba : {t_nb * 1e3:8.2f} ms  ({t_nb / args.batch * 1e6:7.1f} us/genome)"
              f"  speedup x{t_np / t_nb:.1f}")
        same = np.array_equal(kernels._batch_cost_np(genomes, pts, *kw), kernels._batch_cost_nb(genomes, pts, *kw))
        print(f"identical results: {same}")
    else:
        print("numba not installed; numpy path only")

    if args.solve:
        for disable in ((False, True) if HAS_NUMBA else (True,)):
            secs, fit = time_solve(disable)
            print(f"iwpa solve ({'numpy' if disable else 'numba'}): {secs:.2f}s, cost {fit}")


if __name__ == "__main__":
    main()
