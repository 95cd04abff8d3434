"""
Moment estimators, one-step oracle and bound checks
"""

from .bounds import BoundReport, check_p3_bound, static_bounds
from .moments import (
    MomentEstimate,
    default_step,
    estimate_infinitesimal_covariance,
    estimate_infinitesimal_mean,
    expected_infinitesimal_covariance,
    expected_infinitesimal_mean,
    state_hash,
)
from .oracle import one_step_distribution_laplace, one_step_distribution_oracle, total_variation

__all__ = [
    'BoundReport',
    'check_p3_bound',
    'static_bounds',
    'MomentEstimate',
    'default_step',
    'estimate_infinitesimal_covariance',
    'estimate_infinitesimal_mean',
    'expected_infinitesimal_covariance',
    'expected_infinitesimal_mean',
    'state_hash',
    'one_step_distribution_laplace',
    'one_step_distribution_oracle',
    'total_variation',
]
