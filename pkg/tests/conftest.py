"""Shared helpers: random problem generators and solver-independent oracles."""

from __future__ import annotations

import numpy as np

from aftstab import PenaltySpec, SurvivalRecord, WeightedDesign


def random_records(rng, n: int, p: int, censor_prob: float = 0.3) -> list[SurvivalRecord]:
    """Random censored survival records with continuous (tie-free) times."""
    times = rng.exponential(2.0, size=n)
    statuses = (rng.random(n) >= censor_prob).astype(int)
    X = rng.standard_normal((n, p))
    return [
        SurvivalRecord(time=float(times[i]), status=int(statuses[i]), covariates=X[i])
        for i in range(n)
    ]


def random_design(rng, n: int, p: int, y_scale: float = 1.0) -> WeightedDesign:
    """Plain weighted design for solver tests (means are irrelevant there)."""
    X = rng.standard_normal((n, p))
    y = y_scale * rng.standard_normal(n)
    return WeightedDesign(
        X=X, y=y, weighted_mean_x=np.zeros(p), weighted_mean_y=0.0, p=p
    )


def grid_search_minimum(
    design: WeightedDesign,
    penalty: PenaltySpec,
    box: float = 10.0,
    steps: int = 201,
    stages: int = 6,
):
    """Minimize the penalized objective by iteratively refined grid search.

    Works for p in {1, 2}. Each stage lays an odd grid over a per-axis
    window, then shrinks the window to two cells around the incumbent. This
    never touches the coordinate-descent or closed-form solvers, so it is an
    independent oracle for them. Returns ``(beta, objective)``.
    """
    p = design.p
    if p not in (1, 2):
        raise ValueError("grid oracle only supports p = 1 or 2")
    centers = np.zeros(p)
    halves = np.full(p, float(box))
    best_beta = np.zeros(p)
    best_obj = np.inf
    for _ in range(stages):
        axes = []
        cell = np.zeros(p)
        for j in range(p):
            lo = max(centers[j] - halves[j], -box)
            hi = min(centers[j] + halves[j], box)
            ax = np.linspace(lo, hi, steps)
            axes.append(ax)
            cell[j] = ax[1] - ax[0]
        if p == 1:
            grid = axes[0][:, None]
        else:
            a, b = np.meshgrid(axes[0], axes[1], indexing="ij")
            grid = np.column_stack([a.ravel(), b.ravel()])
        residual = design.y[None, :] - grid @ design.X.T
        objective = 0.5 * np.einsum("ki,ki->k", residual, residual)
        objective += penalty.lambda1 * np.abs(grid).sum(axis=1)
        objective += penalty.lambda2 * np.einsum("kj,kj->k", grid, grid)
        k = int(np.argmin(objective))
        if objective[k] < best_obj:
            best_obj = float(objective[k])
            best_beta = grid[k].copy()
        centers = grid[k]
        halves = 2.0 * cell
    return best_beta, best_obj
