"""Compiled versus numpy kernels for the product-state ascent.

Usage::

    python benchmarks/bench_kernels.py [--repeat 200] [--states 20]

Prints per-call ascent timings for several party structures, then the wall
time of full decompositions of random ball states with each backend.
"""

import argparse
import statistics
import time

import numpy as np

from sepball import kernels
from sepball.oracle import search_decomposition
from sepball.states import random_ball_state, random_ginibre, rng_from_seed

STRUCTURES = [(2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 2, 2)]


def time_ascent(impl, R, dims, x0, repeat):
    impl.ascend_product(R, dims, x0, 50)  # warm-up
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        impl.ascend_product(R, dims, x0, 50)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def time_search(impl, n_states):
    original = kernels.ascend_product
    kernels.ascend_product = impl.ascend_product
    try:
        t0 = time.perf_counter()
        for seed in range(n_states):
            rho = random_ball_state(4, 1.0, rng_from_seed(seed), uniform_volume=True)
            search_decomposition(rho, (2, 2), seed=seed)
        return time.perf_counter() - t0
    finally:
        kernels.ascend_product = original


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--states", type=int, default=20)
    args = ap.parse_args()

    backends = kernels.available_backends()
    names = sorted(backends)
    if "compiled" not in backends:
        print("compiled extension not built; timing the numpy fallback only")

    rng = rng_from_seed(0)
    print(f"{'structure':<12}" + "".join(f"{n + ' (us)':>16}" for n in names) + f"{'speedup':>10}")
    for dims in STRUCTURES:
        n = int(np.prod(dims))
        R = np.ascontiguousarray(random_ginibre(n, rng))
        x0 = np.concatenate([np.ones(d, dtype=complex) / np.sqrt(d) for d in dims])
        times = {name: time_ascent(backends[name], R, dims, x0, args.repeat) for name in names}
        speedup = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        label = "x".join(map(str, dims))
        print(f"{label:<12}" + "".join(f"{times[n] * 1e6:16.1f}" for n in names) + f"{speedup:10.1f}")

    print()
    print(f"full decomposition of {args.states} (2,2) ball states:")
    for name in names:
        print(f"  {name:<10}{time_search(backends[name], args.states):8.2f} s")


if __name__ == "__main__":
    main()
