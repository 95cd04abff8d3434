"""
Unit tests for static rate bounds
"""

import math

import pytest

from src.core.exceptions import BoundViolated
from src.estimators.bounds import check_p3_bound, static_bounds
from src.models import bivariate_death
from src.models.bivariate_death import BivariateDeathParams, bivariate_death_system


class TestStaticBounds:
    """Test cases for static_bounds."""

    def test_sir(self, sir_params):
        """Test (m + r + 2 (beta + omega)) P for alpha = 1."""
        rate_bound, increment_bound = static_bounds(sir_params)
        assert rate_bound == pytest.approx((0.02 + 0.5 + 2 * (1.5 + 0.01)) * 200)
        assert increment_bound == 200

    def test_bivariate(self):
        """Test delta (y1(0) + y2(0))."""
        assert static_bounds(BivariateDeathParams(1, 1, 1.0, 1.0)) == (2.0, 2.0)


class TestCheckP3Bound:
    """Test cases for check_p3_bound."""

    def test_bivariate_unit(self):
        """Test lambda = ln 3 under the bound 2 at (1, 1)."""
        params = BivariateDeathParams(1, 1, 1.0, 1.0)
        report = check_p3_bound(bivariate_death_system(params), bivariate_death.initial_state(params), params)
        assert report.lambda_at_state == pytest.approx(math.log(3))
        assert report.static_lambda_bound == 2.0
        assert report.p3_moment_bound == 8.0

    def test_sir_init(self, sir_params, sir_system, sir_init):
        """Test the moment bound P^2 times the rate bound."""
        report = check_p3_bound(sir_system, sir_init, sir_params)
        assert report.lambda_at_state <= report.static_lambda_bound
        assert report.p3_moment_bound == pytest.approx(200 ** 2 * report.static_lambda_bound)
        assert set(report.as_dict()) == {
            'lambda_at_state', 'static_lambda_bound', 'static_increment_bound', 'p3_moment_bound'
        }

    def test_all_recovered(self, sir_params, sir_system):
        """Test that only replacement deaths remain when everybody is immune."""
        report = check_p3_bound(sir_system, sir_system.make_state({'R': 200}), sir_params)
        assert report.lambda_at_state == pytest.approx(sir_params.m * 200)

    def test_violation(self):
        """Test that a state outside the modelled populations breaks the bound."""
        params = BivariateDeathParams(1, 1, 1.0, 1.0)
        spec = bivariate_death_system(params)
        with pytest.raises(BoundViolated):
            check_p3_bound(spec, spec.make_state({'Y1': 10, 'Y2': 10}), params)
