"""
Rate families and closed-form co-jump rate mathematics
"""

from .binomials import PascalTriangle, binomial, get_triangle
from .cojump import (
    CoJumpFamily,
    GammaNoiseParams,
    PairwiseRateTable,
    RateTableCache,
    cojump_covariance_closed_form,
    covariance_by_rate_summation,
    finite_difference_log,
    get_table_cache,
    pairwise_cojump_rate,
    total_cojump_rate,
    univariate_marginal_rate,
)
from .unit import UnitRateFamily

__all__ = [
    'PascalTriangle',
    'binomial',
    'get_triangle',
    'CoJumpFamily',
    'GammaNoiseParams',
    'PairwiseRateTable',
    'RateTableCache',
    'cojump_covariance_closed_form',
    'covariance_by_rate_summation',
    'finite_difference_log',
    'get_table_cache',
    'pairwise_cojump_rate',
    'total_cojump_rate',
    'univariate_marginal_rate',
    'UnitRateFamily',
]
