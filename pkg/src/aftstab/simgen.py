"""Synthetic right-censored log-linear survival datasets.

Covariates start as i.i.d. uniform(0, 1) draws; multiplying by the (lower)
Cholesky factor of an equicorrelation matrix gives columns with the desired
pairwise correlation. Log survival times are linear in the covariates with
standard normal noise, the first ``q`` coefficients equal and nonzero, the
rest zero. Censoring times are uniform on ``(0, c_max]`` with ``c_max``
calibrated by bisection on a large pilot sample so the realized censoring
rate hits a target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .survival_data import SurvivalRecord

CENSORING_SCALES = ("time", "log")
DEFAULT_PILOT_SIZE = 100_000
CALIBRATION_RATE_TOL = 0.005
MAX_BISECTION_ITER = 200


class CalibrationError(RuntimeError):
    """Censoring calibration failed to bracket or converge."""


@dataclass(frozen=True)
class SimConfig:
    """Design of one synthetic scenario.

    ``censoring_scale`` picks whether uniform censoring times compete with
    event times on the original scale (``"time"``, default) or with log
    times (``"log"``).
    """

    n: int
    p: int
    q: int
    beta_value: float = 5.0
    beta0: float = 0.0
    sigma: float = 1.0
    r: float = 0.0
    target_censoring: float = 0.3
    seed: int = 0
    censoring_scale: str = "time"

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if not 0 <= self.q <= self.p:
            raise ValueError("q must lie in [0, p]")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if not 0 <= self.r < 1:
            raise ValueError("pairwise correlation must lie in [0, 1)")
        if not 0 <= self.target_censoring < 1:
            raise ValueError("target censoring rate must lie in [0, 1)")
        if self.censoring_scale not in CENSORING_SCALES:
            raise ValueError(f"censoring_scale must be one of {CENSORING_SCALES}")


@dataclass(frozen=True, eq=False)
class SimulatedDataset:
    """Generated records plus the ground truth needed for scoring."""

    records: list[SurvivalRecord]
    true_support: np.ndarray
    realized_censoring: float


def true_coefficients(config: SimConfig) -> np.ndarray:
    """Generating coefficient vector: ``beta_value`` on the support, 0 after."""
    beta = np.zeros(config.p)
    beta[: config.q] = config.beta_value
    return beta


def equicorrelation_cholesky(p: int, r: float) -> np.ndarray:
    """Lower Cholesky factor of the p x p matrix with 1 on the diagonal, r off it."""
    if p > 1 and not -1.0 / (p - 1) < r < 1:
        raise ValueError(f"equicorrelation matrix is not positive definite for r={r}")
    matrix = np.full((p, p), float(r))
    np.fill_diagonal(matrix, 1.0)
    try:
        return np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise ValueError(f"equicorrelation matrix is not positive definite for r={r}") from None


def _correlated_uniform(rng: np.random.Generator, n: int, p: int, factor: np.ndarray) -> np.ndarray:
    return rng.random((n, p)) @ factor.T


def correlated_uniform(n: int, p: int, r: float, seed: int) -> np.ndarray:
    """n x p matrix of uniform draws transformed to pairwise correlation r."""
    factor = equicorrelation_cholesky(p, r)
    return _correlated_uniform(np.random.default_rng(seed), n, p, factor)


def _censoring_reference(log_times: np.ndarray, scale: str) -> np.ndarray:
    # The quantity uniform censoring times compete with.
    return np.exp(log_times) if scale == "time" else log_times


def calibrate_censoring(config: SimConfig, pilot_size: int = DEFAULT_PILOT_SIZE) -> float:
    """Upper censoring bound giving the target rate on a pilot sample.

    The realized rate is a nonincreasing step function of the bound, so the
    bound is bracketed by doubling and then bisected until the pilot rate is
    within ``CALIBRATION_RATE_TOL`` of the target.
    """
    if not 0 < config.target_censoring < 1:
        raise ValueError("target censoring rate must lie strictly between 0 and 1")
    rng = np.random.default_rng((config.seed, 1))
    factor = equicorrelation_cholesky(config.p, config.r)
    X = _correlated_uniform(rng, pilot_size, config.p, factor)
    noise = rng.standard_normal(pilot_size)
    log_times = config.beta0 + X @ true_coefficients(config) + config.sigma * noise
    reference = _censoring_reference(log_times, config.censoring_scale)
    fractions = 1.0 - rng.random(pilot_size)  # uniform on (0, 1]

    def rate(bound: float) -> float:
        return float(np.mean(reference > bound * fractions))

    target = config.target_censoring
    low, high = 0.0, 1.0
    for _ in range(MAX_BISECTION_ITER):
        if rate(high) <= target:
            break
        high *= 2.0
    else:
        raise CalibrationError(
            f"could not bracket the censoring bound below rate {target} "
            f"within {MAX_BISECTION_ITER} doublings"
        )
    for _ in range(MAX_BISECTION_ITER):
        mid = 0.5 * (low + high)
        realized = rate(mid)
        if abs(realized - target) <= CALIBRATION_RATE_TOL:
            return mid
        if realized > target:
            low = mid
        else:
            high = mid
    raise CalibrationError(
        f"bisection did not reach rate {target} +/- {CALIBRATION_RATE_TOL} "
        f"in {MAX_BISECTION_ITER} iterations"
    )


def generate_aft(
    config: SimConfig, seed: int | None = None, c_max: float | None = None
) -> SimulatedDataset:
    """Draw one dataset from the generating model.

    ``c_max`` may come from :func:`calibrate_censoring` or be supplied; when
    omitted it is calibrated here (no censoring when the target rate is 0).
    """
    if c_max is None:
        c_max = np.inf if config.target_censoring == 0 else calibrate_censoring(config)
    if seed is None:
        seed = config.seed
    rng = np.random.default_rng((seed, 0))
    factor = equicorrelation_cholesky(config.p, config.r)
    X = _correlated_uniform(rng, config.n, config.p, factor)
    noise = rng.standard_normal(config.n)
    log_times = config.beta0 + X @ true_coefficients(config) + config.sigma * noise
    censor = c_max * (1.0 - rng.random(config.n))  # uniform on (0, c_max]
    reference = _censoring_reference(log_times, config.censoring_scale)
    statuses = reference <= censor
    if config.censoring_scale == "time":
        times = np.minimum(reference, censor)
    else:
        times = np.exp(np.minimum(reference, censor))
    records = [
        SurvivalRecord(time=float(times[i]), status=int(statuses[i]), covariates=X[i])
        for i in range(config.n)
    ]
    return SimulatedDataset(
        records=records,
        true_support=np.arange(config.q),
        realized_censoring=1.0 - float(np.mean(statuses)),
    )
