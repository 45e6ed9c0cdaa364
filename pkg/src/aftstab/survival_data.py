"""Right-censored survival data: records, time ordering, Kaplan-Meier weights.

The estimation pipeline works on observations sorted by log survival time.
Each ordered observation carries a Kaplan-Meier weight equal to the jump of
the product-limit survival estimator at that observation; censored rows get
weight zero but still shape the weights of later rows through the risk set.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


class SchemaError(ValueError):
    """The CSV header does not provide the requested columns."""


class RowValidationError(ValueError):
    """A CSV data row fails validation; the message cites the row."""


@dataclass(frozen=True, eq=False)
class SurvivalRecord:
    """One observation: positive follow-up time, event status and covariates.

    ``status`` is 1 when the event was observed and 0 when the observation
    was right-censored.
    """

    time: float
    status: int
    covariates: np.ndarray

    def __post_init__(self):
        if not self.time > 0:
            raise ValueError(f"time must be positive, got {self.time}")
        if self.status not in (0, 1):
            raise ValueError(f"status must be 0 or 1, got {self.status}")
        cov = np.asarray(self.covariates, dtype=np.float64).ravel()
        object.__setattr__(self, "covariates", cov)

    @property
    def p(self) -> int:
        return self.covariates.shape[0]


@dataclass(frozen=True, eq=False)
class OrderedSurvivalData:
    """Observations sorted by log time, with the original-index permutation.

    ``permutation[i]`` is the position of the i-th ordered observation in the
    record list it was built from. At tied times, event rows come before
    censored rows, and the original order breaks remaining ties.
    """

    log_times: np.ndarray
    statuses: np.ndarray
    design: np.ndarray
    permutation: np.ndarray

    @property
    def n(self) -> int:
        return self.log_times.shape[0]

    @property
    def p(self) -> int:
        return self.design.shape[1]

    def restrict(self, rows: np.ndarray) -> "OrderedSurvivalData":
        """Sub-dataset on the given row positions (kept in ascending order).

        Subsetting sorted rows in ascending position order preserves both the
        time ordering and the tie conventions, so no re-sort is needed.
        """
        rows = np.sort(np.asarray(rows, dtype=np.intp))
        return OrderedSurvivalData(
            log_times=self.log_times[rows],
            statuses=self.statuses[rows],
            design=self.design[rows],
            permutation=self.permutation[rows],
        )


@dataclass(frozen=True, eq=False)
class KMWeightVector:
    """Kaplan-Meier weights aligned to an :class:`OrderedSurvivalData`.

    Censored rows have weight exactly zero; the weights sum to at most one,
    with equality exactly when the largest observation is an event.
    """

    weights: np.ndarray

    @property
    def total(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True, eq=False)
class KMSurvivalCurve:
    """Product-limit survival estimate as a right-continuous step function.

    ``survival[i]`` is the estimate just after the i-th ordered observation;
    ``jumps[i]`` is the drop at that observation (zero for censored rows).
    """

    log_times: np.ndarray
    survival: np.ndarray
    jumps: np.ndarray

    def __call__(self, log_time: float) -> float:
        idx = int(np.searchsorted(self.log_times, log_time, side="right"))
        if idx == 0:
            return 1.0
        return float(self.survival[idx - 1])


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for survival CSV files.

    ``covariate_cols=None`` takes every non-time, non-status column in header
    order. ``categorical`` maps a column name to its ordered level list; cell
    values are replaced by the level's position (0, 1, ...).
    """

    time_col: str = "time"
    status_col: str = "status"
    covariate_cols: tuple[str, ...] | None = None
    categorical: dict[str, tuple[str, ...]] = field(default_factory=dict)


def order_by_time(records: list[SurvivalRecord]) -> OrderedSurvivalData:
    """Sort records by log time into an :class:`OrderedSurvivalData`.

    Ties are broken by putting event rows (status 1) before censored rows at
    the same time, then by original position (the sort is stable).
    """
    if not records:
        raise ValueError("need at least one record")
    p = records[0].p
    for i, rec in enumerate(records):
        if rec.p != p:
            raise ValueError(f"record {i} has {rec.p} covariates, expected {p}")
    times = np.array([rec.time for rec in records], dtype=np.float64)
    statuses = np.array([rec.status for rec in records], dtype=np.int64)
    order = np.lexsort((1 - statuses, times)).astype(np.intp)
    design = np.stack([records[i].covariates for i in order]) if p else np.empty((len(records), 0))
    return OrderedSurvivalData(
        log_times=np.log(times[order]),
        statuses=statuses[order],
        design=np.asarray(design, dtype=np.float64),
        permutation=order,
    )


def km_weights(data: OrderedSurvivalData) -> KMWeightVector:
    """Kaplan-Meier weight of each ordered observation.

    The first weight is ``status/n``; each later weight is the event
    indicator over the remaining risk-set size, times the running product of
    ``(n-j)/(n-j+1)`` over all earlier events.
    """
    n = data.n
    statuses = data.statuses
    weights = np.zeros(n, dtype=np.float64)
    running = 1.0
    for i in range(n):
        at_risk = n - i
        if statuses[i]:
            weights[i] = running / at_risk
            running *= (at_risk - 1) / at_risk
    return KMWeightVector(weights=weights)


def km_survival_curve(data: OrderedSurvivalData) -> KMSurvivalCurve:
    """Product-limit survival estimator over the ordered observations.

    Computed as a cumulative product of per-row survival factors, so it is an
    independent cross-check for :func:`km_weights`: the jump at row i equals
    the i-th weight.
    """
    n = data.n
    at_risk = n - np.arange(n, dtype=np.float64)
    factors = 1.0 - data.statuses / at_risk
    survival = np.cumprod(factors)
    before = np.concatenate(([1.0], survival[:-1]))
    return KMSurvivalCurve(
        log_times=data.log_times.copy(),
        survival=survival,
        jumps=before - survival,
    )


def _resolve_columns(header: list[str], schema: CsvSchema, path) -> list[str]:
    """Covariate column names implied by the header and schema."""
    col_index = {name: i for i, name in enumerate(header)}
    for required in (schema.time_col, schema.status_col):
        if required not in col_index:
            raise SchemaError(f"{path}: no column named {required!r} in header")
    if schema.covariate_cols is not None:
        covariate_cols = list(schema.covariate_cols)
        for name in covariate_cols:
            if name not in col_index:
                raise SchemaError(f"{path}: no covariate column named {name!r}")
    else:
        covariate_cols = [
            name for name in header if name not in (schema.time_col, schema.status_col)
        ]
    for name in schema.categorical:
        if name not in col_index:
            raise SchemaError(f"{path}: categorical directive for unknown column {name!r}")
    return covariate_cols


def _read_header(path) -> list[str]:
    with open(path, newline="", encoding="utf-8") as handle:
        try:
            return next(csv.reader(handle))
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None


def csv_covariate_names(path, schema: CsvSchema | None = None) -> list[str]:
    """Covariate column names a :func:`load_csv` call would produce."""
    schema = schema or CsvSchema()
    return _resolve_columns(_read_header(path), schema, path)


def load_csv(path, schema: CsvSchema | None = None) -> list[SurvivalRecord]:
    """Read survival records from a UTF-8, comma-separated file with header.

    Raises :class:`SchemaError` when requested columns are missing and
    :class:`RowValidationError` (citing the 1-based data row) on non-positive
    times, statuses outside {0, 1}, unknown categorical levels, or cells that
    do not parse as numbers. Missing values are not supported.
    """
    schema = schema or CsvSchema()
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)

    col_index = {name: i for i, name in enumerate(header)}
    covariate_cols = _resolve_columns(header, schema, path)

    def parse_cell(raw: str, column: str, row_number: int) -> float:
        if column in schema.categorical:
            levels = schema.categorical[column]
            if raw not in levels:
                raise RowValidationError(
                    f"row {row_number}, column {column!r}: unknown level {raw!r} "
                    f"(expected one of {list(levels)})"
                )
            return float(levels.index(raw))
        try:
            return float(raw)
        except ValueError:
            raise RowValidationError(
                f"row {row_number}, column {column!r}: {raw!r} is not a number"
            ) from None

    records = []
    for row_number, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise RowValidationError(
                f"row {row_number}: expected {len(header)} fields, got {len(row)}"
            )
        for i, raw in enumerate(row):
            if raw.strip() == "":
                raise RowValidationError(
                    f"row {row_number}, column {header[i]!r}: missing value"
                )
        time = parse_cell(row[col_index[schema.time_col]], schema.time_col, row_number)
        status_raw = row[col_index[schema.status_col]]
        status = parse_cell(status_raw, schema.status_col, row_number)
        if status not in (0.0, 1.0):
            raise RowValidationError(
                f"row {row_number}: status must be 0 or 1, got {status_raw!r}"
            )
        if not time > 0:
            raise RowValidationError(f"row {row_number}: time must be positive, got {time}")
        covariates = np.array(
            [parse_cell(row[col_index[name]], name, row_number) for name in covariate_cols],
            dtype=np.float64,
        )
        records.append(SurvivalRecord(time=time, status=int(status), covariates=covariates))
    return records
