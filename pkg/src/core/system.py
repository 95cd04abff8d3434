"""
Markov counting systems: compartments, transitions, states, counts and jumps
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, NewType, Optional, Tuple

from .base_family import BaseRateFamily
from .exceptions import (
    ConfigurationError,
    InvalidJumpSize,
    NegativeOccupancy,
    RateOverflow,
    SystemStateError,
    UnknownTransition,
)

logger = logging.getLogger(__name__)

CompartmentId = NewType('CompartmentId', str)

ARROW = '->'


@dataclass(frozen=True, order=True)
class TransitionType:
    """
    Allowed transition (source, target) between two stages.

    Either end may be a boundary label (births from ``B``, deaths into ``D``)
    that is not materialized as a compartment.
    """

    source: str
    target: str

    def __post_init__(self):
        if not self.source or not self.target:
            raise ConfigurationError("Transition ends must be non-empty labels")
        if self.source == self.target:
            raise ConfigurationError(f"Transition {self.source}{ARROW}{self.target} is a self-loop")

    @classmethod
    def parse(cls, text: str) -> 'TransitionType':
        """
        Parse ``'S->I1'`` notation.

        Args:
            text: Transition written as source->target

        Returns:
            TransitionType
        """
        source, sep, target = text.strip().partition(ARROW)
        if not sep:
            raise ConfigurationError(f"Transition '{text}' must be written as SOURCE{ARROW}TARGET")
        return cls(source.strip(), target.strip())

    def __str__(self) -> str:
        return f"{self.source}{ARROW}{self.target}"


@lru_cache(maxsize=64)
def _index_of(compartments: Tuple[str, ...]) -> Mapping[str, int]:
    return MappingProxyType({label: i for i, label in enumerate(compartments)})


def _occupancy(label: str, value) -> int:
    """Integer occupancy; integral floats are accepted, fractions and bools are not."""
    if isinstance(value, bool):
        raise ConfigurationError(f"Occupancy of {label} must be an integer, got {value!r}")
    try:
        count = int(value)
    except (TypeError, ValueError, OverflowError):
        raise ConfigurationError(f"Occupancy of {label} must be an integer, got {value!r}") from None
    if count != value:
        raise ConfigurationError(f"Occupancy of {label} must be an integer, got {value!r}")
    return count


@dataclass(frozen=True)
class StateVector:
    """
    Compartment occupancies, stored densely in the system's compartment order.
    """

    compartments: Tuple[str, ...]
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.compartments) != len(self.counts):
            raise ConfigurationError("State counts do not match the compartment order")
        for label, value in zip(self.compartments, self.counts):
            if value < 0:
                raise NegativeOccupancy(f"Compartment {label} has negative occupancy {value}")

    @classmethod
    def from_mapping(
        cls,
        compartments: Iterable[str],
        values: Mapping[str, int]
    ) -> 'StateVector':
        """
        Build a state from a label -> count mapping; missing labels are zero.

        Raises:
            ConfigurationError: If the mapping names an unknown compartment or
                holds a non-integer occupancy
        """
        order = tuple(compartments)
        unknown = set(values) - set(order)
        if unknown:
            raise ConfigurationError(f"Unknown compartments in state: {sorted(unknown)}")
        return cls(order, tuple(_occupancy(label, values.get(label, 0)) for label in order))

    def __getitem__(self, label: str) -> int:
        try:
            return self.counts[_index_of(self.compartments)[label]]
        except KeyError:
            raise SystemStateError(f"Compartment {label} is not part of the system") from None

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> Dict[str, int]:
        return dict(zip(self.compartments, self.counts))


@dataclass(frozen=True)
class CountVector:
    """Cumulative transition counts N(t)."""

    counts: Mapping[TransitionType, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'counts', MappingProxyType(dict(self.counts)))

    @classmethod
    def zeros(cls, transitions: Iterable[TransitionType]) -> 'CountVector':
        return cls({t: 0 for t in transitions})

    def __getitem__(self, transition: TransitionType) -> int:
        return self.counts.get(transition, 0)

    def add(self, increments: Mapping[TransitionType, int]) -> 'CountVector':
        """Return a new vector with ``increments`` added."""
        updated = dict(self.counts)
        for transition, size in increments.items():
            updated[transition] = updated.get(transition, 0) + size
        return CountVector(updated)

    def as_dict(self) -> Dict[str, int]:
        return {str(t): n for t, n in sorted(self.counts.items())}


@dataclass(frozen=True)
class JumpEvent:
    """
    One event: transition increments (l) and the state change (u) they induce.

    ``label`` names the rate family that produced the event and ``sizes`` holds
    its (k1, k2) pair, both used for trajectory output only.
    """

    increments: Mapping[TransitionType, int]
    induced: Mapping[str, int]
    label: str = ''
    sizes: Tuple[int, int] = (1, 0)

    def __post_init__(self):
        if not self.increments:
            raise InvalidJumpSize("A jump must increment at least one transition")
        for transition, size in self.increments.items():
            if size <= 0:
                raise InvalidJumpSize(f"Increment of {transition} must be positive, got {size}")
        object.__setattr__(self, 'increments', MappingProxyType(dict(self.increments)))
        object.__setattr__(self, 'induced', MappingProxyType(dict(self.induced)))

    @classmethod
    def from_increments(
        cls,
        increments: Mapping[TransitionType, int],
        compartments: Iterable[str],
        label: str = '',
        sizes: Optional[Tuple[int, int]] = None
    ) -> 'JumpEvent':
        """
        Build an event whose induced change follows mass conservation.

        u_c = sum of inflows into c minus sum of outflows from c, restricted to
        materialized compartments.
        """
        materialized = set(compartments)
        induced: Dict[str, int] = {}
        for transition, size in increments.items():
            if transition.target in materialized:
                induced[transition.target] = induced.get(transition.target, 0) + size
            if transition.source in materialized:
                induced[transition.source] = induced.get(transition.source, 0) - size
        if sizes is None:
            sizes = (sum(increments.values()), 0)
        return cls(increments, induced, label, sizes)


@dataclass(frozen=True)
class SystemSpec:
    """
    A Markov counting system: compartments, allowed transitions and rate families.
    """

    name: str
    compartments: Tuple[str, ...]
    transitions: Tuple[TransitionType, ...]
    unit_families: Tuple[BaseRateFamily, ...] = ()
    cojump_families: Tuple[BaseRateFamily, ...] = ()

    def __post_init__(self):
        if not self.compartments:
            raise ConfigurationError("A system needs at least one compartment")
        if len(set(self.compartments)) != len(self.compartments):
            raise ConfigurationError(f"Duplicate compartment labels in {self.compartments}")
        if len(set(self.transitions)) != len(self.transitions):
            raise ConfigurationError("Duplicate transitions")

        materialized = set(self.compartments)
        for transition in self.transitions:
            if transition.source not in materialized and transition.target not in materialized:
                raise ConfigurationError(f"Transition {transition} touches no compartment")

        allowed = set(self.transitions)
        for family in self.families:
            missing = [str(t) for t in family.transitions if t not in allowed]
            if missing:
                raise ConfigurationError(
                    f"Family {family.name} references transitions outside the system: {missing}"
                )

    @property
    def families(self) -> Tuple[BaseRateFamily, ...]:
        return tuple(self.unit_families) + tuple(self.cojump_families)

    def make_state(self, values: Mapping[str, int]) -> StateVector:
        return StateVector.from_mapping(self.compartments, values)

    def zero_counts(self) -> CountVector:
        return CountVector.zeros(self.transitions)

    def family_rates(self, state: StateVector) -> Tuple[float, ...]:
        """
        Total rate of every family at ``state``, in family order.

        Raises:
            RateOverflow: If a family total is not finite
        """
        rates = tuple(family.total_rate(state) for family in self.families)
        for family, rate in zip(self.families, rates):
            if not math.isfinite(rate):
                raise RateOverflow(f"Family {family.name} has non-finite total rate {rate}")
        return rates


def apply_jump(state: StateVector, event: JumpEvent) -> StateVector:
    """
    Apply the induced state change of ``event``.

    Args:
        state: Current occupancies
        event: Jump to apply

    Returns:
        New state

    Raises:
        NegativeOccupancy: If any compartment would go below zero
    """
    index = _index_of(state.compartments)
    counts = list(state.counts)
    for label, change in event.induced.items():
        if label not in index:
            raise SystemStateError(f"Jump touches unknown compartment {label}")
        counts[index[label]] += change
        if counts[index[label]] < 0:
            raise NegativeOccupancy(
                f"Jump {event.label or dict(event.increments)} empties {label} below zero"
            )
    return StateVector(state.compartments, tuple(counts))


def rate_function(spec: SystemSpec, state: StateVector) -> float:
    """
    Total event rate lambda(x): unit family rates plus closed-form co-jump totals.

    Raises:
        RateOverflow: If any family total is non-finite
    """
    return math.fsum(spec.family_rates(state))


def marginal_rate(
    spec: SystemSpec,
    state: StateVector,
    transition: TransitionType,
    k: int
) -> float:
    """
    Rate of events in which exactly ``k`` transitions of one type occur.

    Args:
        spec: System
        state: Current occupancies
        transition: Transition type
        k: Jump size (>= 1)

    Returns:
        q_ij(x, k)

    Raises:
        UnknownTransition: If ``transition`` is not part of ``spec``
    """
    if transition not in spec.transitions:
        raise UnknownTransition(f"Transition {transition} is not part of system {spec.name}")
    if k < 1:
        raise InvalidJumpSize(f"Marginal jump size must be >= 1, got {k}")
    return math.fsum(
        family.marginal_rate(state, transition, k)
        for family in spec.families
        if family.covers(transition)
    )
