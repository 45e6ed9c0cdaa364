"""Selection scoring against ground truth and aggregation over replicates.

False positives are normalized by the number of true nulls, false negatives
by the number of true signals, so both rates live in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ErrorRates:
    false_positive: float
    false_negative: float


@dataclass(frozen=True, eq=False)
class RunAggregate:
    """Mean error rates and per-variable selection frequency across runs."""

    mean_rates: ErrorRates
    selection_frequency: np.ndarray
    replicates: int


def _as_index_set(indices, p: int, label: str) -> set[int]:
    out = {int(i) for i in indices}
    if any(i < 0 or i >= p for i in out):
        raise ValueError(f"{label} contains indices outside 0..{p - 1}")
    return out


def error_rates(selected, true_support, p: int) -> ErrorRates:
    """False positive and false negative rate of one selection.

    The supports are 0-based index collections. Errors out when either rate
    is undefined: no true signals, or no true nulls.
    """
    sel = _as_index_set(selected, p, "selected")
    true = _as_index_set(true_support, p, "true_support")
    if not true:
        raise ValueError("false negative rate undefined: empty true support")
    if len(true) == p:
        raise ValueError("false positive rate undefined: no true nulls")
    return ErrorRates(
        false_positive=len(sel - true) / (p - len(true)),
        false_negative=len(true - sel) / len(true),
    )


def aggregate_runs(per_run_selections, true_support, p: int) -> RunAggregate:
    """Mean error rates and selection frequency over replicate selections."""
    selections = list(per_run_selections)
    if not selections:
        raise ValueError("need at least one run to aggregate")
    fp = 0.0
    fn = 0.0
    counts = np.zeros(p, dtype=np.int64)
    for selected in selections:
        rates = error_rates(selected, true_support, p)
        fp += rates.false_positive
        fn += rates.false_negative
        for i in _as_index_set(selected, p, "selected"):
            counts[i] += 1
    m = len(selections)
    return RunAggregate(
        mean_rates=ErrorRates(false_positive=fp / m, false_negative=fn / m),
        selection_frequency=counts / m,
        replicates=m,
    )
