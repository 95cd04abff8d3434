"""
Verification suites
"""

from .suites import (
    SUITES,
    BoundsSuite,
    IdentitiesSuite,
    MomentsSuite,
    OracleSuite,
    build_suite,
    chisquare_goodness_of_fit,
    chisquare_two_sample,
)

__all__ = [
    'SUITES',
    'BoundsSuite',
    'IdentitiesSuite',
    'MomentsSuite',
    'OracleSuite',
    'build_suite',
    'chisquare_goodness_of_fit',
    'chisquare_two_sample',
]
