#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the tridiagonal solve and the fused IMEX step at several grid sizes,
prints per-call times and speedups, and finishes with a short end-to-end
front simulation on each backend.  Requires numba; the fallback path is
always available.

Usage:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from frontlab import kernels
from frontlab.initial_data import sub_exponential
from frontlab.reaction import weakly_monostable
from frontlab.solver import SimulationConfig, run


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_thomas(sizes):
    print("\ntridiagonal solve (best of 5, seconds/call)")
    print(f"{'n':>9} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for n in sizes:
        lower = rng.uniform(-1.0, 0.0, n - 1)
        upper = rng.uniform(-1.0, 0.0, n - 1)
        diag = 2.5 + rng.uniform(0.0, 1.0, n)
        rhs = rng.uniform(-1.0, 1.0, n)
        kernels.thomas_solve_numba(lower, diag, upper, rhs)  # compile
        t_py = best_of(lambda: kernels.thomas_solve_python(lower, diag, upper, rhs))
        t_nb = best_of(lambda: kernels.thomas_solve_numba(lower, diag, upper, rhs))
        print(f"{n:>9} {t_py:>12.3e} {t_nb:>12.3e} {t_py / t_nb:>8.1f}x")


def bench_step(sizes):
    print("\nfused IMEX step (best of 5, seconds/call)")
    print(f"{'n':>9} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    rng = np.random.default_rng(1)
    for n in sizes:
        u = np.sort(rng.uniform(0.0, 1.0, n))[::-1].copy()
        f_u = 0.01 * u * (1.0 - u)
        args = (u, f_u, 4.0, 1.0, u[-1])
        kernels.theta_step_numba(*args)  # compile
        t_py = best_of(lambda: kernels.theta_step_python(*args))
        t_nb = best_of(lambda: kernels.theta_step_numba(*args))
        print(f"{n:>9} {t_py:>12.3e} {t_nb:>12.3e} {t_py / t_nb:>8.1f}x")


def bench_end_to_end():
    print("\nend-to-end front run (t_end=5, dx=0.05, dt=0.01, ~2600 cells)")
    config = SimulationConfig(
        reaction=weakly_monostable(alpha=0.4),
        data=sub_exponential(mu=5.0, beta=1.0),
        dx=0.05, dt=0.01, t_end=5.0,
        x_left=-10.0, x_right=120.0, growth_margin=None)
    for backend in ("numba", "numpy"):
        saved = (kernels.thomas_solve, kernels.theta_step, kernels.BACKEND)
        if backend == "numba":
            if kernels.theta_step_numba is None:
                print("  numba unavailable; skipping")
                continue
            kernels.thomas_solve = kernels.thomas_solve_numba
            kernels.theta_step = kernels.theta_step_numba
        else:
            kernels.thomas_solve = kernels.thomas_solve_python
            kernels.theta_step = kernels.theta_step_python
        kernels.BACKEND = backend
        try:
            run(config)  # warm up (jit compile, caches)
            t0 = time.perf_counter()
            result = run(config)
            dt = time.perf_counter() - t0
            x = result.traces[0.5].positions[-1]
            print(f"  {backend:>6}: {dt:7.3f} s   (x_1/2(5) = {x:.6f})")
        finally:
            kernels.thomas_solve, kernels.theta_step, kernels.BACKEND = saved


def main():
    print(f"numba available: {kernels.HAVE_NUMBA}; active backend: {kernels.BACKEND}")
    if not kernels.HAVE_NUMBA:
        print("numba missing: only the numpy fallback can be timed")
    sizes = (1_000, 10_000, 100_000)
    if kernels.HAVE_NUMBA:
        bench_thomas(sizes)
        bench_step(sizes)
    bench_end_to_end()


if __name__ == "__main__":
    main()
