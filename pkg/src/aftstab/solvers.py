"""Penalized weighted least squares solvers and regularization paths.

All three penalties act on the transformed design produced by
:mod:`aftstab.swls` and share one objective family:

    0.5 * ||y - X b||^2 + lambda1 * sum_j |b_j| + lambda2 * b^T b

Lasso (``lambda2 = 0``) and elastic net run cyclic coordinate descent with
soft-thresholding; ridge (``lambda1 = 0``) is the closed-form symmetric
positive-definite solve ``(X^T X + 2 lambda2 I) b = X^T y``. There is no
``1/n`` factor on the loss and no half on the quadratic penalty, which is
why the ridge system carries ``2 lambda2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._kernels import cd_path, cd_solve
from .swls import WeightedDesign

FAMILIES = ("lasso", "ridge", "enet")


class DegenerateDesignError(ValueError):
    """The design carries no usable signal (all-zero columns or responses)."""


class RankDeficiencyError(ValueError):
    """Unpenalized ridge system is singular."""


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family with its l1 and l2 strengths."""

    family: str
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown penalty family {self.family!r}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("penalty strengths must be nonnegative")
        if self.family == "lasso" and self.lambda2 != 0:
            raise ValueError("lasso penalty cannot carry an l2 term")
        if self.family == "ridge" and self.lambda1 != 0:
            raise ValueError("ridge penalty cannot carry an l1 term")

    @classmethod
    def lasso(cls, lambda1: float) -> "PenaltySpec":
        return cls(family="lasso", lambda1=lambda1)

    @classmethod
    def ridge(cls, lambda2: float) -> "PenaltySpec":
        return cls(family="ridge", lambda2=lambda2)

    @classmethod
    def enet(cls, lambda1: float, lambda2: float) -> "PenaltySpec":
        return cls(family="enet", lambda1=lambda1, lambda2=lambda2)


@dataclass(frozen=True)
class SolverOptions:
    """Iteration caps and tolerances for the coordinate-descent solvers.

    ``tolerance`` bounds the largest absolute coefficient change in a full
    sweep. ``unit_scaling`` rescales columns to unit norm before solving and
    maps coefficients back; it changes how the penalty weights columns and
    exists purely as a numerical-robustness knob, off by default.
    """

    max_iterations: int = 10000
    tolerance: float = 1e-7
    unit_scaling: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


DEFAULT_OPTIONS = SolverOptions()


@dataclass(frozen=True, eq=False)
class FitResult:
    """Solution of one penalized problem plus convergence bookkeeping."""

    coefficients: np.ndarray
    converged: bool
    n_iter: int


@dataclass(frozen=True, eq=False)
class CoefficientPath:
    """Per-grid-point solutions along a descending regularization grid."""

    lambdas: np.ndarray
    coefficients: np.ndarray
    converged: np.ndarray

    @property
    def n_points(self) -> int:
        return self.lambdas.shape[0]


def _column_scales(design: WeightedDesign) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->j", design.X, design.X))
    norms[norms == 0] = 1.0
    return norms


def lasso_fit(
    design: WeightedDesign,
    lambda1: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
    beta_init: np.ndarray | None = None,
) -> FitResult:
    """l1-penalized fit by cyclic coordinate descent with soft-thresholding."""
    return enet_fit(design, lambda1, 0.0, opts=opts, beta_init=beta_init)


def enet_fit(
    design: WeightedDesign,
    lambda1: float,
    lambda2: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
    beta_init: np.ndarray | None = None,
) -> FitResult:
    """Combined l1/l2 penalized fit by cyclic coordinate descent."""
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("penalty strengths must be nonnegative")
    if beta_init is None:
        beta_init = np.zeros(design.p)
    if opts.unit_scaling:
        scales = _column_scales(design)
        beta, n_iter, converged = cd_solve(
            design.X / scales,
            design.y,
            lambda1,
            lambda2,
            np.asarray(beta_init) * scales,
            opts.max_iterations,
            opts.tolerance,
        )
        beta = beta / scales
    else:
        beta, n_iter, converged = cd_solve(
            design.X, design.y, lambda1, lambda2, beta_init,
            opts.max_iterations, opts.tolerance,
        )
    return FitResult(coefficients=beta, converged=converged, n_iter=n_iter)


def ridge_fit(design: WeightedDesign, lambda2: float) -> FitResult:
    """Closed-form l2-penalized fit via a symmetric positive-definite solve."""
    if lambda2 < 0:
        raise ValueError("lambda2 must be nonnegative")
    gram = design.X.T @ design.X
    rhs = design.X.T @ design.y
    system = gram + 2.0 * lambda2 * np.eye(design.p)
    try:
        factor = scipy.linalg.cho_factor(system, lower=True)
    except scipy.linalg.LinAlgError:
        raise RankDeficiencyError(
            "ridge system is singular; a positive lambda2 or a full-column-rank "
            "design is required"
        ) from None
    beta = scipy.linalg.cho_solve(factor, rhs)
    return FitResult(coefficients=beta, converged=True, n_iter=1)


def lambda_max(design: WeightedDesign) -> float:
    """Smallest l1 strength at which the lasso solution is all zero."""
    if not np.any(design.X):
        raise DegenerateDesignError("design matrix is identically zero")
    return float(np.max(np.abs(design.X.T @ design.y)))


def lambda_grid(design: WeightedDesign, count: int = 50, ratio: float = 0.01) -> np.ndarray:
    """Geometric grid from ``lambda_max`` down to ``ratio * lambda_max``."""
    if count < 2:
        raise ValueError("count must be at least 2")
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    top = lambda_max(design)
    if top <= 0:
        raise DegenerateDesignError("response is orthogonal to every column")
    return top * ratio ** (np.arange(count) / (count - 1))


def _validate_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty vector")
    if np.any(grid <= 0):
        raise ValueError("grid values must be positive")
    if grid.size > 1 and np.any(np.diff(grid) >= 0):
        raise ValueError("grid must be strictly decreasing")
    return grid


def fit_path(
    design: WeightedDesign,
    grid: np.ndarray,
    penalty: PenaltySpec,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> CoefficientPath:
    """Solve every grid point, warm-starting each fit from the previous one.

    The grid supplies the l1 strength for lasso and elastic net (whose
    ``penalty.lambda2`` stays fixed along the path) and the l2 strength for
    ridge. Non-convergence is flagged per point; the path is still returned.
    """
    grid = _validate_grid(grid)
    if penalty.family == "ridge":
        coefs = np.empty((grid.size, design.p))
        for k, lam2 in enumerate(grid):
            coefs[k] = ridge_fit(design, lam2).coefficients
        return CoefficientPath(
            lambdas=grid, coefficients=coefs, converged=np.ones(grid.size, dtype=bool)
        )
    lam2 = penalty.lambda2 if penalty.family == "enet" else 0.0
    if opts.unit_scaling:
        scales = _column_scales(design)
        coefs, _, converged = cd_path(
            design.X / scales, design.y, grid, lam2, opts.max_iterations, opts.tolerance
        )
        coefs = coefs / scales
    else:
        coefs, _, converged = cd_path(
            design.X, design.y, grid, lam2, opts.max_iterations, opts.tolerance
        )
    return CoefficientPath(lambdas=grid, coefficients=coefs, converged=converged)


def penalized_objective(beta: np.ndarray, design: WeightedDesign, penalty: PenaltySpec) -> float:
    """Objective value at ``beta`` for the given penalty."""
    beta = np.asarray(beta, dtype=np.float64)
    residual = design.y - design.X @ beta
    value = 0.5 * float(residual @ residual)
    value += penalty.lambda1 * float(np.sum(np.abs(beta)))
    value += penalty.lambda2 * float(beta @ beta)
    return value


def kkt_residual(design: WeightedDesign, beta: np.ndarray, penalty: PenaltySpec) -> float:
    """Largest violation of the stationarity conditions at ``beta``.

    Zero coordinates must satisfy ``|x_j^T (y - X b)| <= lambda1``; active
    coordinates must satisfy ``x_j^T (y - X b) - 2 lambda2 b_j = lambda1 *
    sign(b_j)`` (ridge: the same with ``lambda1 = 0`` everywhere).
    """
    beta = np.asarray(beta, dtype=np.float64)
    grad = design.X.T @ (design.y - design.X @ beta) - 2.0 * penalty.lambda2 * beta
    active = beta != 0
    violations = np.where(
        active,
        np.abs(grad - penalty.lambda1 * np.sign(beta)),
        np.maximum(np.abs(grad) - penalty.lambda1, 0.0),
    )
    return float(violations.max()) if violations.size else 0.0


def cross_validate(
    design: WeightedDesign,
    grid: np.ndarray,
    penalty: PenaltySpec,
    folds: int = 5,
    seed: int = 0,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> float:
    """Pick the grid value minimizing K-fold squared prediction error.

    Rows of the weighted design are shuffled once (seeded) and split into
    ``folds`` contiguous blocks. Ties in mean error go to the larger, more
    parsimonious penalty value.
    """
    grid = _validate_grid(grid)
    if folds < 2:
        raise ValueError("folds must be at least 2")
    n = design.n_rows
    if folds > n:
        raise ValueError(f"folds={folds} exceeds the {n} weighted rows")
    rng = np.random.default_rng(seed)
    assignment = rng.permutation(n)
    errors = np.zeros(grid.size)
    for chunk in np.array_split(assignment, folds):
        mask = np.ones(n, dtype=bool)
        mask[chunk] = False
        train = WeightedDesign(
            X=design.X[mask],
            y=design.y[mask],
            weighted_mean_x=design.weighted_mean_x,
            weighted_mean_y=design.weighted_mean_y,
            p=design.p,
        )
        path = fit_path(train, grid, penalty, opts=opts)
        held_X = design.X[chunk]
        held_y = design.y[chunk]
        residual = held_y[None, :] - path.coefficients @ held_X.T
        errors += np.einsum("kj,kj->k", residual, residual)
    return float(grid[int(np.argmin(errors / folds))])
