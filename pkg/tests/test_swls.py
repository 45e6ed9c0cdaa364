"""Tests for the weighted centering transform and loss bookkeeping."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from aftstab import (
    DegenerateDataError,
    SurvivalRecord,
    WeightedDesign,
    km_weights,
    order_by_time,
    recover_intercept,
    swls_loss,
    transform,
)
from conftest import random_records


def build(times, statuses, X):
    records = [
        SurvivalRecord(time=t, status=s, covariates=np.asarray(x, dtype=float))
        for t, s, x in zip(times, statuses, X)
    ]
    data = order_by_time(records)
    return data, km_weights(data)


def weighted_least_squares_loss(beta0, beta, data, weights):
    """Direct weighted sum of squares on the raw (uncentered) data."""
    fitted = beta0 + data.design @ beta
    return 0.5 * float(weights.weights @ (data.log_times - fitted) ** 2)


class TestTransform:
    def test_uniform_weights_reduce_to_plain_centering(self):
        X = np.array([[1.0, 2.0], [3.0, 1.0], [5.0, 0.0]])
        data, weights = build([1.0, 2.0, 3.0], [1, 1, 1], X)
        design = transform(data, weights)
        assert_allclose(design.weighted_mean_x, data.design.mean(axis=0))
        assert_allclose(design.X, (data.design - data.design.mean(axis=0)) / np.sqrt(3))

    def test_zero_weight_rows_are_dropped(self):
        X = np.array([[0.1], [0.2], [0.3], [0.4]])
        data, weights = build([1.0, 2.0, 3.0, 4.0], [1, 0, 1, 1], X)
        design = transform(data, weights)
        assert design.n_rows == 3
        # weighted means still use all rows (censored weights are zero anyway)
        w = weights.weights
        assert_allclose(design.weighted_mean_x, (w @ data.design) / w.sum())

    def test_all_censored_is_degenerate(self):
        data, weights = build([1.0, 2.0], [0, 0], np.zeros((2, 1)))
        with pytest.raises(DegenerateDataError):
            transform(data, weights)

    def test_weighted_column_means_vanish(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(3, 40))
            data = order_by_time(random_records(rng, n, 3))
            weights = km_weights(data)
            if weights.total == 0:
                continue
            design = transform(data, weights)
            root_w = np.sqrt(weights.weights[weights.weights > 0])
            assert np.max(np.abs(root_w @ design.X)) < 1e-10
            assert abs(root_w @ design.y) < 1e-10


class TestRecoverIntercept:
    def make_design(self, mean_x, mean_y, p):
        return WeightedDesign(
            X=np.zeros((2, p)), y=np.zeros(2),
            weighted_mean_x=np.asarray(mean_x, dtype=float),
            weighted_mean_y=mean_y, p=p,
        )

    def test_zero_coefficients_return_weighted_mean(self):
        design = self.make_design([1.5, -2.0], 3.25, 2)
        assert recover_intercept(np.zeros(2), design) == pytest.approx(3.25)

    def test_centered_covariates_ignore_beta(self):
        design = self.make_design([0.0, 0.0], 1.75, 2)
        assert recover_intercept(np.array([4.0, -9.0]), design) == pytest.approx(1.75)

    def test_direct_arithmetic(self):
        design = self.make_design([1.0, 1.0], 2.0, 2)
        assert recover_intercept(np.array([0.5, 0.5]), design) == pytest.approx(1.0)

    def test_length_mismatch_rejected(self):
        design = self.make_design([1.0], 2.0, 1)
        with pytest.raises(ValueError):
            recover_intercept(np.zeros(3), design)


class TestSwlsLoss:
    def test_zero_residual_gives_zero(self):
        design = WeightedDesign(
            X=np.ones((3, 1)), y=np.zeros(3),
            weighted_mean_x=np.zeros(1), weighted_mean_y=0.0, p=1,
        )
        assert swls_loss(np.zeros(1), design) == 0.0

    def test_ols_solution_minimizes_loss(self):
        rng = np.random.default_rng(21)
        X = rng.standard_normal((20, 3))
        y = rng.standard_normal(20)
        design = WeightedDesign(X=X, y=y, weighted_mean_x=np.zeros(3), weighted_mean_y=0.0, p=3)
        beta_hat = np.linalg.lstsq(X, y, rcond=None)[0]
        base = swls_loss(beta_hat, design)
        for _ in range(100):
            assert swls_loss(beta_hat + 0.1 * rng.standard_normal(3), design) >= base

    def test_matches_direct_weighted_sum(self):
        rng = np.random.default_rng(31)
        data = order_by_time(random_records(rng, 10, 3))
        weights = km_weights(data)
        design = transform(data, weights)
        for _ in range(20):
            beta = rng.standard_normal(3)
            direct = weighted_least_squares_loss(recover_intercept(beta, design), beta, data, weights)
            assert swls_loss(beta, design) == pytest.approx(direct, abs=1e-10)


class TestEquivalenceWithRawProblem:
    def test_unpenalized_fit_matches_joint_minimization(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            n = int(rng.integers(12, 40))
            data = order_by_time(random_records(rng, n, 3))
            weights = km_weights(data)
            if np.count_nonzero(weights.weights) < 6:
                continue
            design = transform(data, weights)
            beta = np.linalg.lstsq(design.X, design.y, rcond=None)[0]
            # joint weighted least squares over (intercept, beta) on raw data
            root_w = np.sqrt(weights.weights)
            augmented = np.column_stack([root_w, root_w[:, None] * data.design])
            target = root_w * data.log_times
            joint = np.linalg.lstsq(augmented, target, rcond=None)[0]
            assert_allclose(beta, joint[1:], atol=1e-8)
            assert recover_intercept(beta, design) == pytest.approx(joint[0], abs=1e-8)

    def test_time_rescaling_shifts_only_the_response_mean(self):
        rng = np.random.default_rng(51)
        records = random_records(rng, 20, 2)
        scaled = [
            SurvivalRecord(time=rec.time * 7.5, status=rec.status, covariates=rec.covariates)
            for rec in records
        ]
        base_data = order_by_time(records)
        scaled_data = order_by_time(scaled)
        base = transform(base_data, km_weights(base_data))
        moved = transform(scaled_data, km_weights(scaled_data))
        assert moved.weighted_mean_y == pytest.approx(base.weighted_mean_y + np.log(7.5))
        assert_allclose(moved.X, base.X, atol=1e-12)
        assert_allclose(moved.y, base.y, atol=1e-10)
