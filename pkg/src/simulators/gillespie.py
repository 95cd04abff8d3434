"""
Exact event-driven simulation of Markov counting systems
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import get_settings
from ..core.exceptions import AbsorbedState, ConfigurationError, EventBudgetExceeded
from ..core.system import JumpEvent, StateVector, SystemSpec, TransitionType, apply_jump
from ..rates.cojump import get_table_cache
from .rng import RngStream
from .trajectory import Trajectory

logger = logging.getLogger(__name__)

REPLICATE_CHUNK = 1000

GeneratorLike = Union[RngStream, np.random.Generator]


def _as_generator(rng: GeneratorLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


class GillespieSimulator:
    """
    Direct-method simulator: exponential waiting time at the total rate, a
    family drawn in proportion to its closed-form total, then the family's
    own event draw (a (k1, k2) pair for co-jump families).

    Rates are frozen between events and re-evaluated after each one.
    """

    def __init__(self, spec: SystemSpec, event_budget: Optional[int] = None):
        """
        Initialize the simulator.

        Args:
            spec: System to simulate
            event_budget: Maximum events per trajectory (settings default)
        """
        self.spec = spec
        self.event_budget = event_budget or get_settings().event_budget
        self.logger = logging.getLogger(self.__class__.__name__)

    def _rates(self, state: StateVector) -> Tuple[np.ndarray, float]:
        rates = np.asarray(self.spec.family_rates(state), dtype=float)
        return rates, math.fsum(rates)

    def _select(
        self,
        state: StateVector,
        rates: np.ndarray,
        generator: np.random.Generator
    ) -> JumpEvent:
        cumulative = np.cumsum(rates)
        index = int(np.searchsorted(cumulative, generator.random() * cumulative[-1], side='right'))
        family = self.spec.families[min(index, len(rates) - 1)]
        return family.sample(state, generator)

    def next_event(self, state: StateVector, rng: GeneratorLike) -> Tuple[float, JumpEvent]:
        """
        Draw the waiting time and the next event from ``state``.

        Returns:
            (waiting_time, event)

        Raises:
            AbsorbedState: If the total rate is zero
        """
        generator = _as_generator(rng)
        rates, total = self._rates(state)
        if total <= 0.0:
            raise AbsorbedState(f"No events possible from {state.as_dict()}")
        wait = generator.exponential(1.0 / total)
        return wait, self._select(state, rates, generator)

    def simulate(self, init: StateVector, t_end: float, rng: GeneratorLike) -> Trajectory:
        """
        Simulate every event with time <= t_end.

        Args:
            init: Initial state
            t_end: Horizon (math.inf runs to absorption)
            rng: Stream or generator driving the path

        Returns:
            Trajectory ending at absorption or at the horizon

        Raises:
            EventBudgetExceeded: If the path exceeds the event budget
        """
        if not t_end >= 0.0:
            raise ConfigurationError(f"t_end must be nonnegative, got {t_end}")
        generator = _as_generator(rng)
        trajectory = Trajectory.start(init, self.spec.zero_counts())
        state, time = init, 0.0

        while True:
            rates, total = self._rates(state)
            if total <= 0.0:
                trajectory.absorbed = True
                break
            time += generator.exponential(1.0 / total)
            if time > t_end:
                break
            if trajectory.event_count >= self.event_budget:
                raise EventBudgetExceeded(
                    f"{self.spec.name}: more than {self.event_budget} events before t={t_end}"
                )
            state = trajectory.append(time, self._select(state, rates, generator))

        trajectory.t_end = t_end
        self.logger.debug(
            f"{self.spec.name}: {trajectory.event_count} events, absorbed={trajectory.absorbed}, "
            f"table memo {get_table_cache().stats()}"
        )
        return trajectory

    def increments(
        self,
        init: StateVector,
        h: float,
        transitions: Sequence[TransitionType],
        generator: np.random.Generator,
        initial_rates: Optional[Tuple[np.ndarray, float]] = None
    ) -> List[int]:
        """
        Counting-process increments over [0, h] without storing the path.

        ``initial_rates`` may carry the precomputed family rates at ``init``.
        """
        totals = dict.fromkeys(transitions, 0)
        state, time, events = init, 0.0, 0
        rates, total = initial_rates or self._rates(init)
        while total > 0.0:
            time += generator.exponential(1.0 / total)
            if time > h:
                break
            events += 1
            if events > self.event_budget:
                raise EventBudgetExceeded(f"{self.spec.name}: more than {self.event_budget} events")
            event = self._select(state, rates, generator)
            for transition, size in event.increments.items():
                if transition in totals:
                    totals[transition] += size
            state = apply_jump(state, event)
            rates, total = self._rates(state)
        return [totals[t] for t in transitions]


def next_event(spec: SystemSpec, state: StateVector, rng: GeneratorLike) -> Tuple[float, JumpEvent]:
    """Draw (waiting_time, event) from ``state``; see GillespieSimulator.next_event."""
    return GillespieSimulator(spec).next_event(state, rng)


def simulate(spec: SystemSpec, init: StateVector, t_end: float, rng: GeneratorLike) -> Trajectory:
    """Simulate ``spec`` from ``init`` to ``t_end``; see GillespieSimulator.simulate."""
    return GillespieSimulator(spec).simulate(init, t_end, rng)


def _increment_chunk(
    spec: SystemSpec,
    init: StateVector,
    h: float,
    transitions: Tuple[TransitionType, ...],
    rng: RngStream,
    start: int,
    stop: int,
    event_budget: int
) -> np.ndarray:
    simulator = GillespieSimulator(spec, event_budget)
    initial_rates = simulator._rates(init)
    out = np.empty((stop - start, len(transitions)), dtype=np.int64)
    for row, index in enumerate(range(start, stop)):
        generator = rng.replicate(index).generator()
        out[row] = simulator.increments(init, h, transitions, generator, initial_rates)
    return out


def simulate_increments(
    spec: SystemSpec,
    init: StateVector,
    h: float,
    transitions: Sequence[TransitionType],
    replicates: int,
    rng: RngStream,
    workers: Optional[int] = None
) -> np.ndarray:
    """
    One-step increments of ``transitions`` over [0, h] for many replicates.

    Replicate ``i`` always uses ``rng.replicate(i)`` and chunks are
    concatenated in index order, so the result does not depend on ``workers``.

    Returns:
        Integer array of shape (replicates, len(transitions))
    """
    settings = get_settings()
    workers = workers or settings.workers
    transitions = tuple(transitions)
    bounds = [
        (start, min(start + REPLICATE_CHUNK, replicates))
        for start in range(0, replicates, REPLICATE_CHUNK)
    ]
    if not bounds:
        return np.empty((0, len(transitions)), dtype=np.int64)

    if workers <= 1 or len(bounds) == 1:
        chunks = [
            _increment_chunk(spec, init, h, transitions, rng, start, stop, settings.event_budget)
            for start, stop in bounds
        ]
    else:
        logger.debug(f"Fanning {replicates} replicates over {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_increment_chunk, spec, init, h, transitions, rng,
                            start, stop, settings.event_budget)
                for start, stop in bounds
            ]
            chunks = [future.result() for future in futures]
    return np.concatenate(chunks, axis=0)
