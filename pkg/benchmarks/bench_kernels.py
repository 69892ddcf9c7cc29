"""Benchmark the compiled elimination core against the pure-Python twin.

Times integer Bareiss elimination on random sparse matrices like the
incidence and Cech blocks the cohomology engines produce, plus a full
Betti-table run through whichever backend is active in this process.

Usage: python3 benchmarks/bench_kernels.py [--sizes 120,240] [--trials 3]
"""

import argparse
import random
import time

from trophodge import _kernels_py

try:
    from trophodge import _kernels
except ImportError:
    _kernels = None


def random_matrix(rng, n, m, density=0.15, lo=-9, hi=9):
    return [
        [rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(m)]
        for _ in range(n)
    ]


def time_backend(mod, mats):
    best = None
    for _ in range(3):
        copies = [[row[:] for row in m] for m in mats]
        t0 = time.perf_counter()
        for m in copies:
            mod.rank(m, len(m), len(m[0]))
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_elimination(sizes, trials):
    rng = random.Random(7)
    print(f"{'size':>6} {'python':>10} {'cython':>10} {'speedup':>8}")
    for n in sizes:
        mats = [random_matrix(rng, n, n + n // 4) for _ in range(trials)]
        t_py = time_backend(_kernels_py, mats)
        if _kernels is None:
            print(f"{n:>6} {t_py:>9.4f}s {'n/a':>10} {'n/a':>8}")
            continue
        t_cy = time_backend(_kernels, mats)
        print(f"{n:>6} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>7.2f}x")


def bench_pipeline():
    from trophodge import BACKEND, cohomology, fans, tropspace

    fan = fans.builtin("p3")
    cx = tropspace.tautological_complex(fan)
    t0 = time.perf_counter()
    table = cohomology.betti_table(cx)
    dt = time.perf_counter() - t0
    diag = [table[p][p] for p in range(4)]
    print(f"betti_table(P3) backend={BACKEND}: {dt:.2f}s  diag={diag}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="80,160,240")
    ap.add_argument("--trials", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_elimination(sizes, args.trials)
    bench_pipeline()


if __name__ == "__main__":
    main()
