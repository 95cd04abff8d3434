"""
Model builders
"""

from .bivariate_death import BivariateDeathParams, bivariate_death_system
from .multistrain_sir import SirParams, multistrain_sir_system, strain_force_of_infection

__all__ = [
    'BivariateDeathParams',
    'bivariate_death_system',
    'SirParams',
    'multistrain_sir_system',
    'strain_force_of_infection',
]
