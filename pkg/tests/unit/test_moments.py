"""
Unit tests for infinitesimal moment estimation
"""

import math

import numpy as np
import pytest

from src.core.exceptions import InsufficientReplicates, StepTooLarge, UnknownTransition
from src.core.system import TransitionType, marginal_rate, rate_function
from src.estimators.moments import (
    MomentEstimate,
    covariance_with_batch_error,
    default_step,
    estimate_infinitesimal_covariance,
    estimate_infinitesimal_mean,
    expected_infinitesimal_covariance,
    expected_infinitesimal_mean,
    state_hash,
)
from src.models import bivariate_death, multistrain_sir
from src.models.bivariate_death import BivariateDeathParams, bivariate_death_system
from src.simulators.gillespie import simulate_increments
from src.simulators.rng import RngStream

FIRST = bivariate_death.FIRST_DEATH
SECOND = bivariate_death.SECOND_DEATH


def death_system(y1, y2, delta, tau):
    params = BivariateDeathParams(y1, y2, delta, tau)
    return bivariate_death_system(params), bivariate_death.initial_state(params)


class TestMomentEstimate:
    """Test cases for MomentEstimate."""

    def test_z_score(self):
        """Test z-scores and the sigma window."""
        estimate = MomentEstimate(value=1.5, std_error=0.25, replicates=1000, h=0.01, kind='mean')
        assert estimate.z_score(1.0) == pytest.approx(2.0)
        assert estimate.within(1.0, 3.0)
        assert not estimate.within(0.0, 3.0)

    def test_zero_error(self):
        """Test z-scores of an estimate without spread."""
        estimate = MomentEstimate(value=0.0, std_error=0.0, replicates=1000, h=0.01, kind='covariance')
        assert estimate.z_score(0.0) == 0.0
        assert estimate.z_score(1.0) == math.inf


class TestTargets:
    """Test cases for the weighted-rate-sum targets."""

    def test_single_member_mean(self):
        """Test the mean target ln 2 for one individual."""
        spec, state = death_system(1, 0, 1.0, 1.0)
        assert expected_infinitesimal_mean(spec, state, FIRST) == pytest.approx(math.log(2))

    def test_mean_by_marginals(self):
        """Test the mean target against sum_k k marginal_rate."""
        spec, state = death_system(2, 3, 1.0, 1.0)
        brute = sum(k * marginal_rate(spec, state, FIRST, k) for k in range(1, 3))
        assert expected_infinitesimal_mean(spec, state, FIRST) == pytest.approx(brute, rel=1e-12)

    def test_empty_state_mean(self, sir_system):
        """Test that an empty compartment has zero mean flow."""
        state = sir_system.make_state({'S': 200})
        assert expected_infinitesimal_mean(sir_system, state, multistrain_sir.recovery(1)) == 0.0

    def test_cojump_covariance(self):
        """Test the covariance target at (20, 20)."""
        spec, state = death_system(20, 20, 0.5, 0.2)
        assert expected_infinitesimal_covariance(spec, state, (FIRST, SECOND)) == pytest.approx(16.598, abs=1e-3)

    def test_unit_families_do_not_covary(self, sir_system):
        """Test that separate unit families have zero covariance."""
        state = sir_system.make_state({'S': 150, 'I1': 10, 'I2': 10, 'S1': 15, 'S2': 15})
        pair = (multistrain_sir.recovery(1), multistrain_sir.recovery(2))
        assert expected_infinitesimal_covariance(sir_system, state, pair) == 0.0

    def test_death_replacement_covariance(self, sir_params, sir_system, sir_init):
        """Test that deaths and their replacement births covary at m X_c."""
        pair = (multistrain_sir.death('I1'), multistrain_sir.BIRTH_INTO_S)
        assert expected_infinitesimal_covariance(sir_system, sir_init, pair) == pytest.approx(sir_params.m * 5)

    def test_state_hash(self, sir_init):
        """Test the state digest."""
        digest = state_hash(sir_init)
        assert len(digest) == 12
        assert digest == state_hash(multistrain_sir.initial_state(
            multistrain_sir.SirParams(P=200, beta=0.0, omega=0.0, alpha=1.0, m=0.0, r=0.0)
        ))


class TestDefaultStep:
    """Test cases for default_step."""

    def test_intensity(self, sir_system, sir_init):
        """Test lambda(x) h = intensity."""
        h = default_step(sir_system, sir_init, 0.01)
        assert h * rate_function(sir_system, sir_init) == pytest.approx(0.01)

    def test_absorbing_state(self):
        """Test the fallback step at a state without events."""
        spec, state = death_system(0, 0, 1.0, 1.0)
        assert default_step(spec, state) == 1.0


class TestGuards:
    """Test cases for estimator preconditions."""

    def test_step_too_large(self):
        """Test rejecting h lambda(x) > 0.1."""
        spec, state = death_system(20, 20, 0.5, 0.2)
        with pytest.raises(StepTooLarge):
            estimate_infinitesimal_mean(spec, state, FIRST, 1.0, 1000, RngStream(1))

    def test_too_few_replicates(self):
        """Test rejecting fewer than 1000 replicates."""
        spec, state = death_system(20, 20, 0.5, 0.2)
        with pytest.raises(InsufficientReplicates):
            estimate_infinitesimal_covariance(spec, state, (FIRST, SECOND), 0.001, 999, RngStream(1))

    def test_unknown_transition(self):
        """Test rejecting transitions outside the system."""
        spec, state = death_system(2, 2, 0.5, 0.2)
        with pytest.raises(UnknownTransition):
            estimate_infinitesimal_mean(spec, state, TransitionType('Y1', 'Y2'), 0.001, 1000, RngStream(1))


class TestEstimators:
    """Test cases for the Monte Carlo estimators."""

    def test_mean_single_member(self):
        """Test the mean estimate for one individual against ln 2."""
        spec, state = death_system(1, 0, 1.0, 1.0)
        h = default_step(spec, state, 0.01)
        estimate = estimate_infinitesimal_mean(spec, state, FIRST, h, 20000, RngStream(31))
        assert estimate.kind == 'mean'
        assert estimate.within(math.log(2), 4.0)

    def test_covariance_bivariate(self):
        """Test the covariance estimate at (20, 20) against the closed form."""
        spec, state = death_system(20, 20, 0.5, 0.2)
        estimate = estimate_infinitesimal_covariance(spec, state, (FIRST, SECOND), 0.01, 20000, RngStream(32))
        assert estimate.kind == 'covariance'
        assert estimate.within(expected_infinitesimal_covariance(spec, state, (FIRST, SECOND)), 4.0)

    def test_variance_kind(self):
        """Test that a repeated transition estimates a variance."""
        spec, state = death_system(3, 3, 0.5, 0.5)
        estimate = estimate_infinitesimal_covariance(spec, state, (FIRST, FIRST), 0.01, 1000, RngStream(33))
        assert estimate.kind == 'variance'
        assert estimate.value >= 0.0

    def test_reproducible(self):
        """Test that the same stream gives the same estimate."""
        spec, state = death_system(5, 5, 0.5, 0.5)
        first = estimate_infinitesimal_covariance(spec, state, (FIRST, SECOND), 0.01, 2000, RngStream(34))
        second = estimate_infinitesimal_covariance(spec, state, (FIRST, SECOND), 0.01, 2000, RngStream(34))
        assert first == second

    def test_workers_do_not_change_results(self):
        """Test that process fan-out keeps replicate order."""
        spec, state = death_system(5, 5, 0.5, 0.5)
        serial = simulate_increments(spec, state, 0.05, (FIRST, SECOND), 2500, RngStream(35), workers=1)
        parallel = simulate_increments(spec, state, 0.05, (FIRST, SECOND), 2500, RngStream(35), workers=2)
        assert np.array_equal(serial, parallel)


class TestBatchError:
    """Test cases for covariance_with_batch_error."""

    def test_matches_sample_covariance(self):
        """Test the point estimate and a plausible error."""
        generator = np.random.default_rng(0)
        a = generator.normal(size=10000)
        b = 0.5 * a + generator.normal(size=10000)
        covariance, std_error = covariance_with_batch_error(a, b, 100)
        assert covariance == pytest.approx(np.cov(a, b)[0, 1], rel=1e-12)
        # Var(ab) = 1.5 for this construction
        assert std_error == pytest.approx(math.sqrt(1.5 / 10000), rel=0.3)
