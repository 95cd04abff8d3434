"""
Simulated paths of a Markov counting system
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from ..core.system import CountVector, JumpEvent, StateVector, apply_jump

TIME_FORMAT = '%.9f'
INIT_EVENT = 'init'


@dataclass
class Trajectory:
    """
    Event times, states, cumulative counts and events of one path.

    ``times[0]`` is the start time and ``states[0]``/``counts[0]`` the initial
    condition; ``events[k]`` moves ``states[k]`` to ``states[k + 1]`` at
    ``times[k + 1]``. ``t_end`` is the horizon the path was simulated to.
    """

    times: List[float]
    states: List[StateVector]
    counts: List[CountVector]
    events: List[JumpEvent] = field(default_factory=list)
    t_end: float = 0.0
    absorbed: bool = False

    @classmethod
    def start(cls, init: StateVector, counts: CountVector, t0: float = 0.0) -> 'Trajectory':
        return cls([t0], [init], [counts], [], t0)

    def append(self, time: float, event: JumpEvent) -> StateVector:
        """Record ``event`` at ``time`` and return the new state."""
        state = apply_jump(self.states[-1], event)
        self.times.append(time)
        self.states.append(state)
        self.counts.append(self.counts[-1].add(event.increments))
        self.events.append(event)
        return state

    @property
    def final_state(self) -> StateVector:
        return self.states[-1]

    @property
    def final_counts(self) -> CountVector:
        return self.counts[-1]

    @property
    def event_count(self) -> int:
        return len(self.events)

    def fieldnames(self) -> List[str]:
        return ['time', 'event_type', 'k1', 'k2'] + list(self.states[0].compartments)

    def rows(self) -> List[Dict[str, Any]]:
        """CSV rows: the initial state first, then one row per event."""
        rows = []
        for index, (time, state) in enumerate(zip(self.times, self.states)):
            if index == 0:
                event_type, k1, k2 = INIT_EVENT, 0, 0
            else:
                event = self.events[index - 1]
                event_type = event.label
                k1, k2 = event.sizes
            row = {'time': TIME_FORMAT % time, 'event_type': event_type, 'k1': k1, 'k2': k2}
            row.update(state.as_dict())
            rows.append(row)
        return rows

    def conserves_mass(self) -> bool:
        """
        Check X_c(t) - X_c(0) = inflow counts - outflow counts at every step.

        Integer identity, no tolerance.
        """
        initial = self.states[0]
        base = self.counts[0]
        labels = set(initial.compartments)
        for state, counts in zip(self.states, self.counts):
            net = {label: 0 for label in labels}
            for transition, total in counts.counts.items():
                moved = total - base[transition]
                if transition.target in labels:
                    net[transition.target] += moved
                if transition.source in labels:
                    net[transition.source] -= moved
            for label in labels:
                if state[label] - initial[label] != net[label]:
                    return False
        return True

    def counts_nondecreasing(self) -> bool:
        for previous, current in zip(self.counts, self.counts[1:]):
            if any(current[t] < n for t, n in previous.counts.items()):
                return False
        return True

    def summary(self) -> Dict[str, Any]:
        """Final time, state, event count and per-transition counts."""
        return {
            't_end': self.t_end,
            'last_event_time': self.times[-1],
            'absorbed': self.absorbed,
            'event_count': self.event_count,
            'final_state': self.final_state.as_dict(),
            'transition_counts': self.final_counts.as_dict(),
            'mass_conserved': self.conserves_mass(),
        }
