"""
Base class for rate families
"""

from abc import ABC, abstractmethod
import logging
from typing import TYPE_CHECKING, Tuple

import numpy as np

if TYPE_CHECKING:
    from .system import JumpEvent, StateVector, TransitionType


class BaseRateFamily(ABC):
    """
    Abstract base class for a group of transitions that share one rate law.

    A family contributes a total rate to lambda(x), marginal rates for the
    transitions it drives, the weighted rate sums that give infinitesimal
    moments, and knows how to draw one of its events.
    """

    def __init__(self, name: str):
        """
        Initialize the family.

        Args:
            name: Label used in logs and trajectory output
        """
        self.name = name
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def transitions(self) -> Tuple['TransitionType', ...]:
        """Transitions incremented by this family's events."""

    @abstractmethod
    def total_rate(self, state: 'StateVector') -> float:
        """Total event rate of the family at ``state``."""

    @abstractmethod
    def marginal_rate(self, state: 'StateVector', transition: 'TransitionType', k: int) -> float:
        """Rate of family events incrementing ``transition`` by exactly ``k``."""

    @abstractmethod
    def mean_increment_rate(self, state: 'StateVector', transition: 'TransitionType') -> float:
        """sum_k k * q_ij(x, k) restricted to this family."""

    @abstractmethod
    def cross_increment_rate(
        self,
        state: 'StateVector',
        first: 'TransitionType',
        second: 'TransitionType'
    ) -> float:
        """sum_k k_first * k_second * q(x, k) restricted to this family."""

    @abstractmethod
    def sample(self, state: 'StateVector', generator: np.random.Generator) -> 'JumpEvent':
        """
        Draw one event of this family, given that the family fires.

        Args:
            state: Current occupancies
            generator: Random generator

        Returns:
            The sampled jump
        """

    def covers(self, transition: 'TransitionType') -> bool:
        return transition in self.transitions

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name!r})"
