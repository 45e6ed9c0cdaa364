"""Tests for the synthetic dataset generator and censoring calibration."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from aftstab import (
    SimConfig,
    calibrate_censoring,
    correlated_uniform,
    generate_aft,
    true_coefficients,
)
from aftstab.simgen import equicorrelation_cholesky

BASE_CONFIG = SimConfig(n=50, p=20, q=6, r=0.0, target_censoring=0.3, seed=42)


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SimConfig(n=50, p=20, q=30)
        with pytest.raises(ValueError):
            SimConfig(n=50, p=20, q=6, r=1.0)
        with pytest.raises(ValueError):
            SimConfig(n=50, p=20, q=6, target_censoring=1.0)
        with pytest.raises(ValueError):
            SimConfig(n=0, p=20, q=6)
        with pytest.raises(ValueError):
            SimConfig(n=50, p=20, q=6, censoring_scale="weird")

    def test_true_coefficients(self):
        beta = true_coefficients(BASE_CONFIG)
        assert_allclose(beta[:6], 5.0)
        assert_allclose(beta[6:], 0.0)


class TestCorrelatedUniform:
    def test_identity_factor_returns_raw_uniforms(self):
        raw = np.random.default_rng(9).random((40, 4))
        assert_array_equal(correlated_uniform(40, 4, 0.0, seed=9), raw)

    def test_shape(self):
        assert correlated_uniform(13, 7, 0.3, seed=0).shape == (13, 7)

    def test_factor_reproduces_equicorrelation(self):
        factor = equicorrelation_cholesky(5, 0.4)
        target = np.full((5, 5), 0.4)
        np.fill_diagonal(target, 1.0)
        assert_allclose(factor @ factor.T, target, atol=1e-12)

    def test_empirical_correlation_matches_r(self):
        X = correlated_uniform(100_000, 3, 0.5, seed=123)
        corr = np.corrcoef(X, rowvar=False)
        off_diagonal = corr[~np.eye(3, dtype=bool)]
        assert np.max(np.abs(off_diagonal - 0.5)) < 0.01

    def test_non_positive_definite_r_rejected(self):
        with pytest.raises(ValueError):
            equicorrelation_cholesky(3, -0.9)


class TestCalibrateCensoring:
    def test_target_rate_reached_on_pilot(self):
        c_max = calibrate_censoring(BASE_CONFIG, pilot_size=50_000)
        assert c_max > 0
        # behavioral check on fresh data generated with the calibrated bound
        rates = [
            generate_aft(BASE_CONFIG, seed=k, c_max=c_max).realized_censoring
            for k in range(60)
        ]
        assert abs(float(np.mean(rates)) - 0.3) < 0.02

    def test_heavy_censoring_target_converges(self):
        config = SimConfig(n=50, p=5, q=2, target_censoring=0.66, seed=3)
        c_max = calibrate_censoring(config, pilot_size=50_000)
        rates = [
            generate_aft(config, seed=k, c_max=c_max).realized_censoring for k in range(60)
        ]
        assert abs(float(np.mean(rates)) - 0.66) < 0.03

    def test_larger_bound_censors_less(self):
        config = SimConfig(n=400, p=4, q=2, target_censoring=0.4, seed=5)
        c_max = calibrate_censoring(config, pilot_size=20_000)
        low = generate_aft(config, seed=1, c_max=c_max).realized_censoring
        high = generate_aft(config, seed=1, c_max=2 * c_max).realized_censoring
        assert high <= low

    def test_degenerate_targets_rejected(self):
        with pytest.raises(ValueError):
            calibrate_censoring(SimConfig(n=10, p=2, q=1, target_censoring=0.0))


class TestGenerateAft:
    def test_noiseless_uncensored_times_are_exact(self):
        config = SimConfig(n=30, p=4, q=2, sigma=0.0, target_censoring=0.0, seed=7)
        dataset = generate_aft(config, c_max=np.inf)
        X = np.stack([rec.covariates for rec in dataset.records])
        log_times = np.log([rec.time for rec in dataset.records])
        assert_allclose(log_times, X @ true_coefficients(config), atol=1e-12)
        assert all(rec.status == 1 for rec in dataset.records)

    def test_true_support_is_leading_block(self):
        dataset = generate_aft(BASE_CONFIG, c_max=np.inf)
        assert_array_equal(dataset.true_support, np.arange(6))

    def test_realized_censoring_matches_statuses(self):
        c_max = calibrate_censoring(BASE_CONFIG, pilot_size=20_000)
        dataset = generate_aft(BASE_CONFIG, seed=1, c_max=c_max)
        censored = sum(1 for rec in dataset.records if rec.status == 0)
        assert dataset.realized_censoring == pytest.approx(censored / BASE_CONFIG.n)

    def test_deterministic_given_seed(self):
        c_max = 100.0
        first = generate_aft(BASE_CONFIG, seed=11, c_max=c_max)
        second = generate_aft(BASE_CONFIG, seed=11, c_max=c_max)
        for a, b in zip(first.records, second.records):
            assert a.time == b.time
            assert a.status == b.status
            assert_array_equal(a.covariates, b.covariates)

    def test_mean_censoring_near_target_across_replicates(self):
        c_max = calibrate_censoring(BASE_CONFIG, pilot_size=50_000)
        rates = [
            generate_aft(BASE_CONFIG, seed=k, c_max=c_max).realized_censoring
            for k in range(100)
        ]
        assert abs(float(np.mean(rates)) - 0.3) < 0.03

    def test_log_scale_censoring_runs(self):
        config = SimConfig(
            n=200, p=3, q=2, target_censoring=0.3, seed=13, censoring_scale="log"
        )
        c_max = calibrate_censoring(config, pilot_size=30_000)
        dataset = generate_aft(config, c_max=c_max)
        assert 0.1 < dataset.realized_censoring < 0.5
        assert all(rec.time > 0 for rec in dataset.records)
