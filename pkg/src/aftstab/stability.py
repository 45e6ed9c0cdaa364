"""Stability selection: half-sample subsampling and selection probabilities.

Each subsample of size ``floor(n/2)`` is drawn without replacement from the
ordered observations, gets fresh Kaplan-Meier weights (risk sets change with
the subsample), is re-centered, and is fit over the whole regularization
grid. A variable's selection probability at a grid point is the fraction of
subsamples in which the rule picked it; the stable set keeps variables whose
maximum probability over the grid reaches the threshold.

Subsample randomness is derived per subsample index from ``(seed, b)``, so
results are bit-identical no matter how many worker threads run the fits.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .solvers import DEFAULT_OPTIONS, PenaltySpec, SolverOptions, fit_path
from .survival_data import OrderedSurvivalData, km_weights
from .swls import transform

NONZERO_EPS = 1e-10
REDRAW_FACTOR = 100


class DegenerateCensoringError(RuntimeError):
    """Could not draw enough subsamples containing an uncensored observation."""


@dataclass(frozen=True)
class SelectionRule:
    """How a coefficient vector is turned into a selected-variable set.

    ``nonzero`` keeps coordinates with magnitude above a float-noise floor;
    ``magnitude`` keeps coordinates with ``|b_j| >= tau`` and is meant for
    ridge, which never produces exact zeros.
    """

    kind: str = "nonzero"
    tau: float = 1.0

    def __post_init__(self):
        if self.kind not in ("nonzero", "magnitude"):
            raise ValueError(f"unknown selection rule {self.kind!r}")
        if self.kind == "magnitude" and not self.tau > 0:
            raise ValueError("magnitude rule needs a positive tau")


def default_selection_rule(family: str) -> SelectionRule:
    """Nonzero rule for lasso and elastic net, |b| >= 1 for ridge."""
    if family == "ridge":
        return SelectionRule(kind="magnitude", tau=1.0)
    return SelectionRule(kind="nonzero")


@dataclass(frozen=True, eq=False)
class StabilityResult:
    """Selection probabilities per variable and grid point.

    ``probabilities`` has shape (p, grid length) and every entry is a
    multiple of ``1/subsample_count``. ``threshold`` and ``stable_variables``
    stay ``None`` until a threshold is applied.
    """

    probabilities: np.ndarray
    max_per_variable: np.ndarray
    subsample_count: int
    lambdas: np.ndarray
    threshold: float | None = None
    stable_variables: np.ndarray | None = None

    @property
    def p(self) -> int:
        return self.probabilities.shape[0]


def selection_indicator(coefficients: np.ndarray, rule: SelectionRule) -> np.ndarray:
    """Boolean selection mask for a coefficient vector (or stack of them)."""
    magnitude = np.abs(np.asarray(coefficients, dtype=np.float64))
    if rule.kind == "nonzero":
        return magnitude > NONZERO_EPS
    return magnitude >= rule.tau


def _half_sample(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.choice(n, size=n // 2, replace=False)


def subsample_indices(n: int, B: int, seed: int) -> np.ndarray:
    """B half-samples of size ``floor(n/2)``, one independent stream per row."""
    if n < 2:
        raise ValueError("need at least two observations to subsample")
    if B < 1:
        raise ValueError("B must be at least 1")
    return np.stack([_half_sample(np.random.default_rng((seed, b)), n) for b in range(B)])


def _draw_eligible(data: OrderedSurvivalData, B: int, seed: int) -> list[np.ndarray]:
    """Half-samples with at least one event each, redrawing ineligible ones."""
    if data.n < 2:
        raise ValueError("need at least two observations to subsample")
    draws: list[np.ndarray] = []
    budget = REDRAW_FACTOR * B
    attempts = 0
    for b in range(B):
        rng = np.random.default_rng((seed, b))
        while True:
            attempts += 1
            if attempts > budget:
                raise DegenerateCensoringError(
                    f"exceeded {budget} subsample draws without finding {B} "
                    "subsamples containing an uncensored observation"
                )
            rows = _half_sample(rng, data.n)
            if data.statuses[rows].sum() >= 1:
                draws.append(rows)
                break
    return draws


def selection_probabilities(
    data: OrderedSurvivalData,
    penalty: PenaltySpec,
    grid: np.ndarray,
    B: int,
    seed: int,
    rule: SelectionRule | None = None,
    opts: SolverOptions = DEFAULT_OPTIONS,
    threads: int = 1,
) -> StabilityResult:
    """Selection probability of every variable at every grid point.

    Fits may run on several threads; per-subsample randomness comes from
    ``(seed, b)`` and counts are merged in subsample order, so the result
    does not depend on ``threads``.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    rule = rule or default_selection_rule(penalty.family)
    grid = np.asarray(grid, dtype=np.float64)
    draws = _draw_eligible(data, B, seed)

    def fit_one(rows: np.ndarray) -> np.ndarray:
        sub = data.restrict(rows)
        design = transform(sub, km_weights(sub))
        path = fit_path(design, grid, penalty, opts=opts)
        return selection_indicator(path.coefficients, rule)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            indicators = list(pool.map(fit_one, draws))
    else:
        indicators = [fit_one(rows) for rows in draws]

    counts = np.zeros((data.p, grid.size), dtype=np.int64)
    for indicator in indicators:
        counts += indicator.T
    probabilities = counts / B
    return StabilityResult(
        probabilities=probabilities,
        max_per_variable=probabilities.max(axis=1),
        subsample_count=B,
        lambdas=grid,
    )


def stable_set(result: StabilityResult, threshold: float = 0.6) -> np.ndarray:
    """Variables whose maximum selection probability reaches the threshold."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie strictly between 0 and 1")
    return np.flatnonzero(result.max_per_variable >= threshold)


def with_stable_set(result: StabilityResult, threshold: float = 0.6) -> StabilityResult:
    """Copy of ``result`` with the threshold applied and the stable set filled."""
    return replace(result, threshold=threshold, stable_variables=stable_set(result, threshold))
