#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Backend selection happens at import time via RADIAL_EIGEN_BACKEND, so each
backend runs in a fresh subprocess. The workload exercises the three hot
paths: an eigenvalue shot with event detection, a bracket bisection on a
regularized potential, and one Picard operator application.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKLOAD = textwrap.dedent(
    """
    import json, time
    import numpy as np
    from radial_eigen import (BACKEND, Operator, Potential, PucciParams,
                              RadialProblem, picard_T)
    from radial_eigen.eigensolvers import eigen_bisect, eigen_shoot_scale

    p = PucciParams(1.0, 1.0, 3, 0.5)
    shot = RadialProblem(p, Operator.M_PLUS, gamma=1.2, potential=Potential.singular())
    reg = shot.with_(potential=Potential.regularized(1e-3))
    pic = shot.with_(gamma=1.5, mu=1.0)

    # warm-up triggers compilation on the numba backend
    eigen_shoot_scale(shot, tol=1e-8)
    eigen_bisect(reg, tol=1e-8)
    picard_T(pic, lambda r: np.ones_like(r), n_grid=400, tol=1e-8)

    out = {"backend": BACKEND}
    reps = int(%(repeat)d)

    t0 = time.perf_counter()
    for _ in range(reps):
        eigen_shoot_scale(shot, tol=1e-10)
    out["shoot_ms"] = (time.perf_counter() - t0) / reps * 1e3

    t0 = time.perf_counter()
    for _ in range(reps):
        eigen_bisect(reg, tol=1e-9)
    out["bisect_ms"] = (time.perf_counter() - t0) / reps * 1e3

    t0 = time.perf_counter()
    for _ in range(reps):
        picard_T(pic, lambda r: np.ones_like(r), n_grid=400, tol=1e-9)
    out["picard_T_ms"] = (time.perf_counter() - t0) / reps * 1e3

    print(json.dumps(out))
    """
)


def run_backend(backend: str, repeat: int) -> dict:
    env = dict(os.environ, RADIAL_EIGEN_BACKEND=backend)
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD % {"repeat": repeat}],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = []
    for backend in ("numpy", "numba"):
        try:
            rows.append(run_backend(backend, args.repeat))
        except subprocess.CalledProcessError as exc:
            print(f"{backend} backend failed:\n{exc.stderr}", file=sys.stderr)
    if not rows:
        return 1
    keys = ["shoot_ms", "bisect_ms", "picard_T_ms"]
    print(f"{'kernel':<12}" + "".join(f"{r['backend']:>14}" for r in rows) + f"{'speedup':>10}")
    for k in keys:
        vals = [r[k] for r in rows]
        speed = vals[0] / vals[-1] if len(vals) > 1 and vals[-1] > 0 else float("nan")
        print(f"{k:<12}" + "".join(f"{v:>13.2f}m" for v in vals) + f"{speed:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
