"""Tests for error-rate scoring and replicate aggregation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from aftstab import aggregate_runs, error_rates


class TestErrorRates:
    def test_perfect_selection(self):
        rates = error_rates({0, 1, 2}, {0, 1, 2}, p=10)
        assert rates.false_positive == 0.0
        assert rates.false_negative == 0.0

    def test_two_extra_nulls(self):
        rates = error_rates(set(range(8)), set(range(6)), p=20)
        assert rates.false_positive == pytest.approx(2 / 14)
        assert rates.false_negative == 0.0

    def test_half_of_signals_missed(self):
        rates = error_rates({0, 1, 2}, set(range(6)), p=20)
        assert rates.false_positive == 0.0
        assert rates.false_negative == 0.5

    def test_subset_selection_has_no_false_positives(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            true = set(rng.choice(10, size=4, replace=False).tolist())
            selected = set(list(true)[:2])
            assert error_rates(selected, true, p=10).false_positive == 0.0

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        perm = rng.permutation(12)
        selected = {0, 3, 5}
        true = {0, 1, 2, 3}
        base = error_rates(selected, true, p=12)
        mapped = error_rates({int(perm[i]) for i in selected}, {int(perm[i]) for i in true}, p=12)
        assert base == mapped

    def test_undefined_rates_rejected(self):
        with pytest.raises(ValueError):
            error_rates({0}, set(), p=4)
        with pytest.raises(ValueError):
            error_rates({0}, {0, 1, 2, 3}, p=4)
        with pytest.raises(ValueError):
            error_rates({9}, {0}, p=4)


class TestAggregateRuns:
    def test_constant_selections_equal_single_run(self):
        runs = [{0, 1, 4} for _ in range(5)]
        aggregate = aggregate_runs(runs, {0, 1}, p=6)
        single = error_rates({0, 1, 4}, {0, 1}, p=6)
        assert aggregate.mean_rates == single
        assert aggregate.replicates == 5

    def test_frequency_counting(self):
        aggregate = aggregate_runs([{0}, {1}], {0, 1}, p=4)
        assert_allclose(aggregate.selection_frequency, [0.5, 0.5, 0.0, 0.0])

    def test_frequencies_are_multiples_of_one_over_runs(self):
        rng = np.random.default_rng(2)
        runs = [set(rng.choice(8, size=3, replace=False).tolist()) for _ in range(7)]
        aggregate = aggregate_runs(runs, {0, 1, 2}, p=8)
        scaled = aggregate.selection_frequency * 7
        assert_allclose(scaled, np.round(scaled), atol=1e-12)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            aggregate_runs([], {0}, p=3)
