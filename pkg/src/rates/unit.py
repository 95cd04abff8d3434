"""
Unit-rate families: one transition fires one at a time
"""

import math
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from ..core.base_family import BaseRateFamily
from ..core.exceptions import ConfigurationError
from ..core.system import JumpEvent, StateVector, TransitionType


class UnitRateFamily(BaseRateFamily):
    """
    A single transition with a state-dependent event rate.

    Every event increments ``transition`` by one. ``companions`` are counted
    in the same event, also by one; death-with-replacement uses this to pair
    a death c->D with the compensating birth B->S.
    """

    def __init__(
        self,
        transition: TransitionType,
        rate: Callable[[StateVector], float],
        companions: Iterable[TransitionType] = (),
        name: Optional[str] = None
    ):
        """
        Initialize the family.

        Args:
            transition: Driving transition
            rate: Event rate as a picklable callable of the state
            companions: Transitions incremented together with ``transition``
            name: Label for logs and trajectories
        """
        companions = tuple(companions)
        if transition in companions or len(set(companions)) != len(companions):
            raise ConfigurationError(f"Companions of {transition} must be distinct transitions")
        super().__init__(name or str(transition))
        self.transition = transition
        self.companions = companions
        self.rate = rate

    @property
    def transitions(self) -> Tuple[TransitionType, ...]:
        return (self.transition,) + self.companions

    def total_rate(self, state: StateVector) -> float:
        value = float(self.rate(state))
        if value < 0 or math.isnan(value):
            raise ConfigurationError(f"Family {self.name} produced rate {value!r}")
        return value

    def marginal_rate(self, state: StateVector, transition: TransitionType, k: int) -> float:
        if k != 1 or not self.covers(transition):
            return 0.0
        return self.total_rate(state)

    def mean_increment_rate(self, state: StateVector, transition: TransitionType) -> float:
        return self.total_rate(state) if self.covers(transition) else 0.0

    def cross_increment_rate(
        self,
        state: StateVector,
        first: TransitionType,
        second: TransitionType
    ) -> float:
        if self.covers(first) and self.covers(second):
            return self.total_rate(state)
        return 0.0

    def sample(self, state: StateVector, generator: np.random.Generator) -> JumpEvent:
        increments = {t: 1 for t in self.transitions}
        return JumpEvent.from_increments(increments, state.compartments, self.name, (1, 0))

