"""
Exact simulators and the gamma-subordinator oracle
"""

from .gillespie import GillespieSimulator, next_event, simulate, simulate_increments
from .rng import RngStream
from .subordinator import sample_subordinated_bivariate_death, simulate_subordinated_bivariate_death
from .trajectory import Trajectory

__all__ = [
    'GillespieSimulator',
    'next_event',
    'simulate',
    'simulate_increments',
    'RngStream',
    'sample_subordinated_bivariate_death',
    'simulate_subordinated_bivariate_death',
    'Trajectory',
]
