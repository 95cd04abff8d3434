"""
Reproducible random streams
"""

from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ConfigurationError

_U64 = 1 << 64


@dataclass(frozen=True)
class RngStream:
    """
    A (seed, stream_id) pair naming one independent random stream.

    Streams are Philox counter-based generators keyed through a
    SeedSequence spawn key, so distinct stream ids are independent by
    construction and any stream can be rebuilt from its pair alone.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name, value in (('seed', self.seed), ('stream_id', self.stream_id)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigurationError(f"RNG {name} must be an integer, got {value!r}")
            if not 0 <= int(value) < _U64:
                raise ConfigurationError(f"RNG {name} must fit in 64 bits, got {value}")

    def _sequence(self, *key: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),) + key)

    def generator(self) -> np.random.Generator:
        """A new generator positioned at the start of this stream."""
        return np.random.Generator(np.random.Philox(self._sequence()))

    def replicate(self, index: int) -> 'RngStream':
        """
        Stream for replicate ``index`` of a Monte Carlo run driven by this stream.

        Replicate streams are keyed by (stream_id, index), so they never collide
        with the parent stream or with each other.
        """
        derived = int(self._sequence(int(index)).generate_state(1, dtype=np.uint64)[0])
        return RngStream(derived, 0)
