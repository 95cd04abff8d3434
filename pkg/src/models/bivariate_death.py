"""
Two linear death processes sharing one gamma noise
"""

from dataclasses import dataclass

from ..core.exceptions import ConfigurationError
from ..core.system import StateVector, SystemSpec, TransitionType
from ..rates.cojump import CoJumpFamily, GammaNoiseParams

NAME = 'bivariate_death'
FIRST = 'Y1'
SECOND = 'Y2'
DEATH = 'D'

FIRST_DEATH = TransitionType(FIRST, DEATH)
SECOND_DEATH = TransitionType(SECOND, DEATH)


@dataclass(frozen=True)
class BivariateDeathParams:
    """Deterministic initial populations, common death rate and noise magnitude."""

    y1_0: int
    y2_0: int
    delta: float
    tau: float

    def __post_init__(self):
        if self.y1_0 < 0 or self.y2_0 < 0:
            raise ConfigurationError(f"Initial populations must be nonnegative, got ({self.y1_0}, {self.y2_0})")
        if not self.delta > 0:
            raise ConfigurationError(f"delta must be positive, got {self.delta}")
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")

    @property
    def noise(self) -> GammaNoiseParams:
        return GammaNoiseParams(self.tau)


@dataclass(frozen=True)
class ConstantRate:
    """Picklable state-independent per-capita rate."""

    value: float

    def __call__(self, state: StateVector) -> float:
        return self.value


def bivariate_death_system(params: BivariateDeathParams) -> SystemSpec:
    """
    Build the system Y1 -> D, Y2 -> D with one co-jump family at rate delta.

    Args:
        params: Model parameters

    Returns:
        SystemSpec with compartments (Y1, Y2) and no unit families
    """
    family = CoJumpFamily(
        FIRST_DEATH,
        SECOND_DEATH,
        ConstantRate(float(params.delta)),
        params.noise,
        name='death',
    )
    return SystemSpec(
        name=NAME,
        compartments=(FIRST, SECOND),
        transitions=(FIRST_DEATH, SECOND_DEATH),
        cojump_families=(family,),
    )


def initial_state(params: BivariateDeathParams) -> StateVector:
    return StateVector((FIRST, SECOND), (int(params.y1_0), int(params.y2_0)))
