"""Timing comparison of the two zero-forcing kernel backends.

Runs the first-column quadratic-form kernel on a Monte Carlo workload
sized like a real sweep (trials x links stacks of complex matrices) under
both the numba backend and the vectorized numpy fallback, then reports
the per-backend wall time and throughput.  The numba path is warmed up
first so JIT compilation does not pollute the measurement.

    python3 benchmarks/backend_bench.py --trials 20000 --repeat 5
"""

import argparse
import os
import time

import numpy as np

from hapsim import kernels
from hapsim.zfcore import CONDITION_LIMIT


def build_workload(trials: int, links: int, rows: int, cols: int, seed: int):
    rng = np.random.default_rng(seed)
    los = np.empty((links, rows, cols), dtype=np.complex128)
    for l in range(links):
        v = np.exp(2j * np.pi * rng.uniform(size=rows))
        w = np.exp(2j * np.pi * rng.uniform(size=cols))
        los[l] = np.outer(v, w)
    re = rng.standard_normal((trials, links, rows, cols))
    im = rng.standard_normal((trials, links, rows, cols))
    nlos = (re + 1j * im) / np.sqrt(2.0)
    kappa = np.full(links, 10.0)
    a = np.sqrt(kappa / (1.0 + kappa))
    b = np.sqrt(1.0 / (1.0 + kappa))
    return los, nlos, a, b


def time_backend(backend: str, workload, repeat: int) -> float:
    los, nlos, a, b = workload
    os.environ[kernels.BACKEND_ENV_VAR] = backend
    # Warm-up call compiles the numba kernels and touches the caches.
    kernels.first_stream_quadforms(los, nlos[:2], a, b, CONDITION_LIMIT)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        q, singular = kernels.first_stream_quadforms(los, nlos, a, b,
                                                     CONDITION_LIMIT)
        best = min(best, time.perf_counter() - t0)
    # Keep the result alive so nothing is optimized away.
    assert q.shape[0] == nlos.shape[0] and singular.shape == q.shape
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=20000,
                        help="Monte Carlo trials per call (default 20000)")
    parser.add_argument("--links", type=int, default=6,
                        help="matrices per trial (default 6)")
    parser.add_argument("--rows", type=int, default=4)
    parser.add_argument("--cols", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timed repetitions, best is kept (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    workload = build_workload(args.trials, args.links, args.rows, args.cols,
                              args.seed)
    saved = os.environ.get(kernels.BACKEND_ENV_VAR)
    results = {}
    try:
        for backend in kernels.available_backends():
            results[backend] = time_backend(backend, workload, args.repeat)
    finally:
        if saved is None:
            os.environ.pop(kernels.BACKEND_ENV_VAR, None)
        else:
            os.environ[kernels.BACKEND_ENV_VAR] = saved

    matrices = args.trials * args.links
    print(f"workload: {args.trials} trials x {args.links} links of "
          f"{args.rows}x{args.cols} complex matrices")
    for backend, seconds in results.items():
        rate = matrices / seconds / 1e6
        print(f"  {backend:<6} {seconds * 1e3:9.2f} ms   "
              f"{rate:6.2f} M matrices/s")
    if "numba" in results and "numpy" in results:
        print(f"  speedup numba over numpy: "
              f"{results['numpy'] / results['numba']:.2f}x")
    if not kernels.HAVE_NUMBA:
        print("  numba not installed; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
