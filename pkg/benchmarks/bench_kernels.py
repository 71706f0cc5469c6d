"""Time the numba and numpy kernel backends on office-replica workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--plan]

Each row reports the best-of-N wall time per call for both backends and
checks that their outputs agree. ``--plan`` also times one full planner
run per backend in a subprocess (the backend is fixed at import time).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from socialrrt.kernels import get_backend
from socialrrt.scenario import load_fixture


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def workloads(sc, rng):
    geom = sc.robot.as_array()
    offs = sc.object.as_array()
    w = sc.interest_points.weight_vector(sc.object)
    persons = sc.field.as_array()
    b = sc.world.bounds_array()
    rects, discs = sc.world.rect_array(), sc.world.disc_array()
    lo = np.array([b[0], b[1], 0.0, 0.0])
    hi = np.array([b[2], b[3], 2 * np.pi, 2 * np.pi])
    Q = lo + rng.random((2000, 4)) * (hi - lo)
    qa, qb = Q[0], Q[0] + np.array([0.8, 0.3, 0.4, -0.2])
    near = Q[:40]
    return {
        "config_distances(2000)": lambda k: k.config_distances(Q, qb, 1.0),
        "social_costs(2000)": lambda k: k.social_costs(Q, geom, offs, w, persons),
        "valid_configs(2000)": lambda k: k.valid_configs(Q, geom, offs, b, rects, discs, persons),
        "motion_social_cost": lambda k: k.motion_social_cost(qa, qb, 1.0, 0.05, geom, offs, w, persons),
        "edge_social_costs(40)": lambda k: k.edge_social_costs(near, qb, 1.0, 0.05, geom, offs, w, persons),
        "collision_free": lambda k: k.collision_free(qa, qb, 1.0, 0.05, geom, offs, b, rects, discs, persons),
    }


def time_plan(backend, iterations):
    env = dict(os.environ, SOCIALRRT_NO_NUMBA="1" if backend == "numpy" else "0")
    code = (
        "import time; from dataclasses import replace\n"
        "from socialrrt.scenario import load_fixture; from socialrrt.planner import plan\n"
        "sc = load_fixture('office'); p = replace(sc.planner, K=%d)\n"
        "plan(sc, replace(p, K=50))\n"
        "t = time.perf_counter(); r = plan(sc, p); print(time.perf_counter() - t, r.total_F)\n" % iterations
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    secs, cost = out.stdout.split()
    return float(secs), float(cost)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--plan", action="store_true")
    ap.add_argument("--iterations", type=int, default=2000)
    args = ap.parse_args()

    sc = load_fixture("office")
    nb, npy = get_backend("numba"), get_backend("numpy")
    print(f"{'kernel':26s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}  agree")
    for name, fn in workloads(sc, np.random.default_rng(0)).items():
        a, b = fn(nb), fn(npy)
        agree = np.allclose(a, b, rtol=1e-12, atol=1e-12)
        t_nb = best_of(lambda: fn(nb), args.repeat)
        t_np = best_of(lambda: fn(npy), args.repeat)
        print(f"{name:26s} {t_nb * 1e3:11.4f} {t_np * 1e3:11.4f} {t_np / t_nb:8.1f}x  {agree}")

    if args.plan:
        s_nb, c_nb = time_plan("numba", args.iterations)
        s_np, c_np = time_plan("numpy", args.iterations)
        print(f"\nfull plan K={args.iterations}: numba {s_nb:.2f} s, numpy {s_np:.2f} s "
              f"({s_np / s_nb:.1f}x), costs {c_nb!r} / {c_np!r}")


if __name__ == "__main__":
    main()
