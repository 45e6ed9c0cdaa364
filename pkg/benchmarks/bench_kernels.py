"""Time the numba coordinate-descent kernels against the numpy fallback.

The workloads mirror what subsampled selection actually runs: warm-started
lasso/elastic-net paths over a descending grid on small weighted designs.
Run from the repository root:

    python3 benchmarks/bench_kernels.py

Set AFTSTAB_DISABLE_NUMBA=1 to confirm which path the package would pick at
import time; this script always times both explicitly (when numba is
available).
"""

import time

import numpy as np

from aftstab._kernels import (
    NUMBA_ENABLED,
    cd_path,
    cd_path_kernel_jit,
    cd_path_kernel_numpy,
)

CASES = [
    # (rows, cols, grid size, repeats) ~ subsample paths at the two
    # benchmark dimensions plus one larger design
    ("subsample p=20", 18, 20, 25, 400),
    ("subsample p=60", 18, 60, 25, 150),
    ("full data p=60", 35, 60, 50, 60),
    ("clinical-sized p=75", 49, 75, 25, 40),
]


def make_problem(rng, n, p, n_grid):
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[: max(2, p // 10)] = 3.0
    y = X @ beta + rng.standard_normal(n)
    top = float(np.max(np.abs(X.T @ y)))
    grid = top * (0.04 ** (np.arange(n_grid) / (n_grid - 1)))
    return X, y, grid


def time_kernel(kernel, problems, repeats):
    start = time.perf_counter()
    for X, y, grid in problems[:repeats]:
        cd_path(X, y, grid, 0.1, 10000, 1e-7, kernel=kernel)
    return time.perf_counter() - start


def main():
    print(f"numba available and active: {NUMBA_ENABLED}")
    rng = np.random.default_rng(0)
    if NUMBA_ENABLED:
        # trigger compilation outside the timed region
        warm = make_problem(rng, 10, 5, 8)
        cd_path(*warm, 0.1, 100, 1e-7, kernel=cd_path_kernel_jit)
    header = f"{'case':22} {'paths':>6} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, n, p, n_grid, repeats in CASES:
        problems = [make_problem(rng, n, p, n_grid) for _ in range(repeats)]
        numpy_s = time_kernel(cd_path_kernel_numpy, problems, repeats)
        if NUMBA_ENABLED:
            numba_s = time_kernel(cd_path_kernel_jit, problems, repeats)
            print(f"{name:22} {repeats:>6} {numpy_s:>9.3f}s {numba_s:>9.3f}s "
                  f"{numpy_s / numba_s:>7.1f}x")
        else:
            print(f"{name:22} {repeats:>6} {numpy_s:>9.3f}s {'n/a':>10} {'n/a':>8}")


if __name__ == "__main__":
    main()
