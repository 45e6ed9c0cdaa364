"""Stability selection for right-censored accelerated failure time models.

Kaplan-Meier-weighted least squares regularized by lasso, ridge or elastic
net, with half-sample stability selection and a simulation benchmark
harness. See the ``aftstab`` command-line entry point for the file-based
workflow.
"""

from ._kernels import NUMBA_ENABLED
from .metrics import ErrorRates, RunAggregate, aggregate_runs, error_rates
from .simgen import (
    CalibrationError,
    SimConfig,
    SimulatedDataset,
    calibrate_censoring,
    correlated_uniform,
    generate_aft,
    true_coefficients,
)
from .solvers import (
    CoefficientPath,
    DegenerateDesignError,
    FitResult,
    PenaltySpec,
    RankDeficiencyError,
    SolverOptions,
    cross_validate,
    enet_fit,
    fit_path,
    kkt_residual,
    lambda_grid,
    lambda_max,
    lasso_fit,
    penalized_objective,
    ridge_fit,
)
from .stability import (
    DegenerateCensoringError,
    SelectionRule,
    StabilityResult,
    default_selection_rule,
    selection_indicator,
    selection_probabilities,
    stable_set,
    subsample_indices,
    with_stable_set,
)
from .survival_data import (
    CsvSchema,
    KMSurvivalCurve,
    KMWeightVector,
    OrderedSurvivalData,
    RowValidationError,
    SchemaError,
    SurvivalRecord,
    csv_covariate_names,
    km_survival_curve,
    km_weights,
    load_csv,
    order_by_time,
)
from .swls import DegenerateDataError, WeightedDesign, recover_intercept, swls_loss, transform

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "__version__",
    "CalibrationError",
    "CoefficientPath",
    "CsvSchema",
    "DegenerateCensoringError",
    "DegenerateDataError",
    "DegenerateDesignError",
    "ErrorRates",
    "FitResult",
    "KMSurvivalCurve",
    "KMWeightVector",
    "OrderedSurvivalData",
    "PenaltySpec",
    "RankDeficiencyError",
    "RowValidationError",
    "RunAggregate",
    "SchemaError",
    "SelectionRule",
    "SimConfig",
    "SimulatedDataset",
    "SolverOptions",
    "StabilityResult",
    "SurvivalRecord",
    "WeightedDesign",
    "aggregate_runs",
    "calibrate_censoring",
    "correlated_uniform",
    "cross_validate",
    "csv_covariate_names",
    "default_selection_rule",
    "enet_fit",
    "error_rates",
    "fit_path",
    "generate_aft",
    "kkt_residual",
    "km_survival_curve",
    "km_weights",
    "lambda_grid",
    "lambda_max",
    "lasso_fit",
    "load_csv",
    "order_by_time",
    "penalized_objective",
    "recover_intercept",
    "ridge_fit",
    "selection_indicator",
    "selection_probabilities",
    "stable_set",
    "subsample_indices",
    "swls_loss",
    "transform",
    "true_coefficients",
    "with_stable_set",
]
