"""Coordinate-descent kernels: numba-jitted hot path with a numpy fallback.

The cyclic coordinate-descent sweep is the inner loop of every lasso and
elastic-net fit and runs hundreds of thousands of times during subsampled
selection, so the default implementation is compiled with numba. Setting
the environment variable ``AFTSTAB_DISABLE_NUMBA=1`` (or installing without
numba) switches to a pure-numpy implementation of the same algorithm; the
two paths agree to float round-off. ``benchmarks/bench_kernels.py`` times
one against the other.

All kernels minimize

    0.5 * ||y - X b||^2 + lam1 * sum_j |b_j| + lam2 * b^T b

with soft-threshold updates ``b_j <- S(x_j^T r + ||x_j||^2 b_j, lam1) /
(||x_j||^2 + 2 lam2)`` in fixed column order. A sweep converges when the
largest absolute coefficient change falls below ``tol``. Columns with zero
sum of squares keep a zero coefficient.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "AFTSTAB_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(_ENV_FLAG, "0").strip().lower() not in ("1", "true", "yes")


def _cd_solve_impl(X, r, beta, col_ss, lam1, lam2, max_iter, tol):
    # In-place on r and beta; r must equal y - X @ beta on entry.
    n, p = X.shape
    n_iter = 0
    for sweep in range(max_iter):
        n_iter = sweep + 1
        max_delta = 0.0
        for j in range(p):
            if col_ss[j] <= 0.0:
                continue
            old = beta[j]
            rho = col_ss[j] * old
            for i in range(n):
                rho += X[i, j] * r[i]
            if rho > lam1:
                new = (rho - lam1) / (col_ss[j] + 2.0 * lam2)
            elif rho < -lam1:
                new = (rho + lam1) / (col_ss[j] + 2.0 * lam2)
            else:
                new = 0.0
            if new != old:
                diff = old - new
                for i in range(n):
                    r[i] += X[i, j] * diff
                beta[j] = new
                if abs(diff) > max_delta:
                    max_delta = abs(diff)
        if max_delta < tol:
            return n_iter, True
    return n_iter, False


def _cd_path_impl(X, y, lam1s, lam2, col_ss, max_iter, tol):
    # Warm-started sweep over a descending lam1 grid.
    n, p = X.shape
    n_lam = lam1s.shape[0]
    coefs = np.zeros((n_lam, p))
    iters = np.zeros(n_lam, dtype=np.int64)
    converged = np.zeros(n_lam, dtype=np.bool_)
    beta = np.zeros(p)
    r = y.copy()
    for k in range(n_lam):
        lam1 = lam1s[k]
        done = False
        n_iter = 0
        for sweep in range(max_iter):
            n_iter = sweep + 1
            max_delta = 0.0
            for j in range(p):
                if col_ss[j] <= 0.0:
                    continue
                old = beta[j]
                rho = col_ss[j] * old
                for i in range(n):
                    rho += X[i, j] * r[i]
                if rho > lam1:
                    new = (rho - lam1) / (col_ss[j] + 2.0 * lam2)
                elif rho < -lam1:
                    new = (rho + lam1) / (col_ss[j] + 2.0 * lam2)
                else:
                    new = 0.0
                if new != old:
                    diff = old - new
                    for i in range(n):
                        r[i] += X[i, j] * diff
                    beta[j] = new
                    if abs(diff) > max_delta:
                        max_delta = abs(diff)
            if max_delta < tol:
                done = True
                break
        coefs[k, :] = beta
        iters[k] = n_iter
        converged[k] = done
    return coefs, iters, converged


def _cd_solve_impl_numpy(X, r, beta, col_ss, lam1, lam2, max_iter, tol):
    p = beta.shape[0]
    denom = col_ss + 2.0 * lam2
    n_iter = 0
    for sweep in range(max_iter):
        n_iter = sweep + 1
        max_delta = 0.0
        for j in range(p):
            if col_ss[j] <= 0.0:
                continue
            old = beta[j]
            rho = float(X[:, j] @ r) + col_ss[j] * old
            if rho > lam1:
                new = (rho - lam1) / denom[j]
            elif rho < -lam1:
                new = (rho + lam1) / denom[j]
            else:
                new = 0.0
            if new != old:
                r += X[:, j] * (old - new)
                beta[j] = new
                max_delta = max(max_delta, abs(old - new))
        if max_delta < tol:
            return n_iter, True
    return n_iter, False


def _cd_path_impl_numpy(X, y, lam1s, lam2, col_ss, max_iter, tol):
    n_lam = lam1s.shape[0]
    p = X.shape[1]
    coefs = np.zeros((n_lam, p))
    iters = np.zeros(n_lam, dtype=np.int64)
    converged = np.zeros(n_lam, dtype=np.bool_)
    beta = np.zeros(p)
    r = y.copy()
    for k in range(n_lam):
        n_iter, done = _cd_solve_impl_numpy(X, r, beta, col_ss, lam1s[k], lam2, max_iter, tol)
        coefs[k, :] = beta
        iters[k] = n_iter
        converged[k] = done
    return coefs, iters, converged


cd_solve_kernel_numpy = _cd_solve_impl_numpy
cd_path_kernel_numpy = _cd_path_impl_numpy

cd_solve_kernel_jit = None
cd_path_kernel_jit = None
NUMBA_ENABLED = False

if _numba_requested():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        cd_solve_kernel_jit = njit(cache=True, nogil=True)(_cd_solve_impl)
        cd_path_kernel_jit = njit(cache=True, nogil=True)(_cd_path_impl)
        NUMBA_ENABLED = True

_cd_solve_kernel = cd_solve_kernel_jit if NUMBA_ENABLED else cd_solve_kernel_numpy
_cd_path_kernel = cd_path_kernel_jit if NUMBA_ENABLED else cd_path_kernel_numpy


def _prepare(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Column-major layout keeps the inner loops contiguous.
    Xf = np.asfortranarray(X, dtype=np.float64)
    return Xf, np.einsum("ij,ij->j", Xf, Xf)


def cd_solve(X, y, lam1, lam2, beta_init, max_iter, tol, kernel=None):
    """One penalized fit; returns ``(beta, n_iter, converged)``."""
    kernel = kernel or _cd_solve_kernel
    Xf, col_ss = _prepare(X)
    beta = np.array(beta_init, dtype=np.float64, copy=True)
    r = np.asarray(y, dtype=np.float64) - Xf @ beta
    n_iter, converged = kernel(
        Xf, r, beta, col_ss, float(lam1), float(lam2), int(max_iter), float(tol)
    )
    return beta, int(n_iter), bool(converged)


def cd_path(X, y, lam1s, lam2, max_iter, tol, kernel=None):
    """Warm-started fits along a lam1 grid; returns ``(coefs, iters, converged)``."""
    kernel = kernel or _cd_path_kernel
    Xf, col_ss = _prepare(X)
    lam1s = np.asarray(lam1s, dtype=np.float64)
    coefs, iters, converged = kernel(
        Xf,
        np.asarray(y, dtype=np.float64),
        lam1s,
        float(lam2),
        col_ss,
        int(max_iter),
        float(tol),
    )
    return coefs, iters, converged
