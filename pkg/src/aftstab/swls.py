"""Weighted centering transform for censored weighted least squares.

Centering predictors and responses by their Kaplan-Meier-weighted means and
scaling each row by the square root of its weight removes the intercept:
ordinary (unpenalized, intercept-free) least squares on the transformed
matrix equals the weighted least squares criterion on the raw data. Rows
with zero weight contribute nothing to the quadratic loss and are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .survival_data import KMWeightVector, OrderedSurvivalData


class DegenerateDataError(ValueError):
    """All observations are censored, so every weight is zero."""


@dataclass(frozen=True, eq=False)
class WeightedDesign:
    """Weighted, centered design ready for the penalized solvers.

    ``X`` and ``y`` hold only the rows with positive weight. The weighted
    means are kept so predictions and intercepts can be mapped back to the
    uncentered scale.
    """

    X: np.ndarray
    y: np.ndarray
    weighted_mean_x: np.ndarray
    weighted_mean_y: float
    p: int

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]


def transform(data: OrderedSurvivalData, weights: KMWeightVector) -> WeightedDesign:
    """Apply the weighted centering transform.

    Weighted means use the weights normalized by their sum; each surviving
    row is the centered observation scaled by the square root of its weight.
    """
    w = weights.weights
    total = w.sum()
    if not total > 0:
        raise DegenerateDataError("all observations censored: zero total weight")
    mean_x = (w @ data.design) / total
    mean_y = float(w @ data.log_times) / total
    keep = w > 0
    root_w = np.sqrt(w[keep])
    X = root_w[:, None] * (data.design[keep] - mean_x)
    y = root_w * (data.log_times[keep] - mean_y)
    return WeightedDesign(
        X=np.asarray(X, dtype=np.float64),
        y=np.asarray(y, dtype=np.float64),
        weighted_mean_x=mean_x,
        weighted_mean_y=mean_y,
        p=data.p,
    )


def recover_intercept(beta: np.ndarray, design: WeightedDesign) -> float:
    """Implied intercept on the uncentered scale for coefficients ``beta``."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (design.p,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({design.p},)")
    return design.weighted_mean_y - float(design.weighted_mean_x @ beta)


def swls_loss(beta: np.ndarray, design: WeightedDesign) -> float:
    """Half the squared residual norm on the transformed data."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (design.p,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({design.p},)")
    residual = design.y - design.X @ beta
    return 0.5 * float(residual @ residual)
