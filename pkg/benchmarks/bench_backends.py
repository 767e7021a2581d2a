#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs the three hottest estimators under both backends with identical
random streams, reports wall times and the relative disagreement (which
should sit at summation-order level, ~1e-12).

    python benchmarks/bench_backends.py [--samples N] [--threads T]
"""

import argparse
import time

import numpy as np

from frachardy import geometry as g
from frachardy import kernels
from frachardy import quadrature as q
from frachardy.functions import RadialBump
from frachardy.geometry import Params


def run_case(name, fn, backends, repeats=3):
    rows = {}
    for backend in backends:
        kernels.set_backend(backend)
        fn()  # warm (jit compile / cache touch)
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
        rows[backend] = (value, best)
    v_np, t_np = rows["numpy"]
    v_nb, t_nb = rows["numba"]
    rel = abs(v_np - v_nb) / max(abs(v_np), 1e-300)
    print(f"{name:<28s} numpy {t_np:7.3f}s   numba {t_nb:7.3f}s   "
          f"speedup {t_np / t_nb:5.2f}x   rel-diff {rel:.2e}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    u2 = RadialBump(center=[0.0, 0.0], radius=1.0, exponent=2.0)
    p2 = Params(N=2, p=2.0, s=0.5)
    K2 = g.Ball(center=[0.0, 0.0], radius=2.0)
    spec = q.QuadratureSpec(seed=99, outer_samples=args.samples)
    backends = ("numpy", "numba")

    print(f"samples/integral: {args.samples}, threads: {args.threads}")
    run_case("gagliardo seminorm (N=2)",
             lambda: q.gagliardo_seminorm_p(u2, p2, spec, threads=args.threads).value,
             backends)
    run_case("hardy weighted norm (N=2)",
             lambda: q.hardy_weighted_norm(u2, K2, p2, spec, threads=args.threads).value,
             backends)
    run_case("truncated operator (N=2)",
             lambda: q.truncated_nonlocal_operator(
                 K2, np.array([0.5, 0.0]), 1e-3, p2, spec, threads=args.threads).value,
             backends)
    run_case("expedient integral (N=2)",
             lambda: q.expedient_lhs(K2, np.array([0.5, 0.0]), p2, spec,
                                     threads=args.threads).value,
             backends)


if __name__ == "__main__":
    main()
