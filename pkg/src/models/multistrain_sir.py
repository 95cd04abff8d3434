"""
Two-strain SIR-type model with demographic replacement and strain-wise gamma noise

Compartments: S (susceptible to both strains), I1 and I2 (infected), S1 and
S2 (susceptible to one strain only), I1* and I2* (second infection) and R
(immune to both). Births replace deaths one for one, so the population
stays at P. With noise, the two infection transitions of strain i share one
gamma noise and fire as a co-jump family; strains are independent.
"""

import logging
from dataclasses import dataclass
from functools import partial
from typing import Dict, Mapping, Optional, Tuple

from ..core.base_family import BaseRateFamily
from ..core.exceptions import ConfigurationError, UnsupportedGamma
from ..core.system import StateVector, SystemSpec, TransitionType
from ..rates.cojump import CoJumpFamily, GammaNoiseParams
from ..rates.unit import UnitRateFamily

logger = logging.getLogger(__name__)

NAME = 'multistrain_sir'
STRAINS = (1, 2)
COMPARTMENTS = ('S', 'I1', 'I2', 'S1', 'S2', 'I1*', 'I2*', 'R')
BIRTH = 'B'
DEATH = 'D'

DEFAULT_INIT = {'S': 190, 'I1': 5, 'I2': 5}


@dataclass(frozen=True)
class SirParams:
    """
    Model parameters.

    ``tau=None`` disables noise; infection transitions are then plain unit
    families and cross-immunity ``gamma`` may be nonzero.
    """

    P: int
    beta: float
    omega: float
    alpha: float
    m: float
    r: float
    gamma: float = 0.0
    tau: Optional[float] = None

    def __post_init__(self):
        if self.P <= 0:
            raise ConfigurationError(f"Population size P must be positive, got {self.P}")
        for name in ('beta', 'omega', 'm', 'r'):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.tau is not None and not self.tau > 0:
            raise ConfigurationError(f"tau must be positive or null, got {self.tau}")

    @property
    def noisy(self) -> bool:
        return self.tau is not None

    def max_force_of_infection(self) -> float:
        """lambda_i with every individual infected: beta P^(alpha - 1) + omega."""
        return self.beta * self.P ** self.alpha / self.P + self.omega


def infection(strain: int) -> TransitionType:
    return TransitionType('S', f"I{strain}")


def reinfection(strain: int) -> TransitionType:
    return TransitionType(f"S{strain}", f"I{strain}*")


def recovery(strain: int) -> TransitionType:
    return TransitionType(f"I{strain}", f"S{strain}")


def second_recovery(strain: int) -> TransitionType:
    return TransitionType(f"I{strain}*", 'R')


def death(compartment: str) -> TransitionType:
    return TransitionType(compartment, DEATH)


BIRTH_INTO_S = TransitionType(BIRTH, 'S')


def strain_force_of_infection(state: StateVector, params: SirParams, strain: int) -> float:
    """
    Per-susceptible infection rate beta (I_i + I_i*)^alpha / P + omega.

    0^0 is taken as 1, so with alpha = 0 the rate is beta / P + omega even
    without infectives.
    """
    if strain not in STRAINS:
        raise ConfigurationError(f"Strain must be 1 or 2, got {strain}")
    infectives = state[f"I{strain}"] + state[f"I{strain}*"]
    return params.beta * float(infectives) ** params.alpha / params.P + params.omega


def _occupancy_rate(state: StateVector, compartment: str, coefficient: float) -> float:
    return coefficient * state[compartment]


def _infection_rate(
    state: StateVector,
    params: SirParams,
    strain: int,
    compartment: str,
    factor: float
) -> float:
    return factor * strain_force_of_infection(state, params, strain) * state[compartment]


def _transitions() -> Tuple[TransitionType, ...]:
    transitions = []
    for strain in STRAINS:
        transitions += [infection(strain), reinfection(strain), recovery(strain), second_recovery(strain)]
    transitions += [death(c) for c in COMPARTMENTS]
    transitions.append(BIRTH_INTO_S)
    return tuple(transitions)


def _infection_families(params: SirParams) -> Tuple[Tuple[BaseRateFamily, ...], Tuple[BaseRateFamily, ...]]:
    """(unit families, co-jump families) driving infections."""
    if params.noisy:
        noise = GammaNoiseParams(params.tau)
        cojumps = tuple(
            CoJumpFamily(
                infection(strain),
                reinfection(strain),
                partial(strain_force_of_infection, params=params, strain=strain),
                noise,
                name=f"infection{strain}",
            )
            for strain in STRAINS
        )
        return (), cojumps

    units = []
    for strain in STRAINS:
        units.append(UnitRateFamily(
            infection(strain),
            partial(_infection_rate, params=params, strain=strain, compartment='S', factor=1.0),
        ))
        units.append(UnitRateFamily(
            reinfection(strain),
            partial(_infection_rate, params=params, strain=strain,
                    compartment=f"S{strain}", factor=1.0 - params.gamma),
        ))
    return tuple(units), ()


def multistrain_sir_system(params: SirParams) -> SystemSpec:
    """
    Build the two-strain system.

    Recovery I_i -> S_i and I_i* -> R fire at rate r per infective. Every
    compartment c loses members at rate m X_c; each death is paired with a
    birth into S (a death from S changes nothing but is counted). Infections
    are co-jump families over (S -> I_i, S_i -> I_i*) at per-capita rate
    lambda_i when noise is on.

    Raises:
        UnsupportedGamma: If gamma != 0 together with noise
    """
    if params.noisy and params.gamma != 0.0:
        raise UnsupportedGamma(
            f"Cross-immunity gamma={params.gamma} has no co-jump closed form; set gamma to 0 or tau to null"
        )

    recoveries = []
    for strain in STRAINS:
        for transition in (recovery(strain), second_recovery(strain)):
            recoveries.append(UnitRateFamily(
                transition,
                partial(_occupancy_rate, compartment=transition.source, coefficient=params.r),
            ))

    demography = [
        UnitRateFamily(
            death(compartment),
            partial(_occupancy_rate, compartment=compartment, coefficient=params.m),
            companions=(BIRTH_INTO_S,),
            name=f"death:{compartment}",
        )
        for compartment in COMPARTMENTS
    ]

    infection_units, cojumps = _infection_families(params)
    logger.debug(f"Building {NAME} with P={params.P}, tau={params.tau}, {len(cojumps)} co-jump families")
    return SystemSpec(
        name=NAME,
        compartments=COMPARTMENTS,
        transitions=_transitions(),
        unit_families=tuple(infection_units) + tuple(recoveries) + tuple(demography),
        cojump_families=cojumps,
    )


def initial_state(params: SirParams, values: Optional[Mapping[str, int]] = None) -> StateVector:
    """
    Build an initial state; compartments left out are zero.

    Raises:
        ConfigurationError: If the occupancies do not sum to P
    """
    values: Dict[str, int] = dict(DEFAULT_INIT if values is None else values)
    state = StateVector.from_mapping(COMPARTMENTS, values)
    if state.total != params.P:
        raise ConfigurationError(f"Initial occupancies sum to {state.total}, expected P={params.P}")
    return state
