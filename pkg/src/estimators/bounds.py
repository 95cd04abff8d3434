"""
Static rate and increment bounds behind the covariance moment condition
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Tuple, Union

from ..core.exceptions import BoundViolated, ConfigurationError
from ..core.system import StateVector, SystemSpec, rate_function
from ..models.bivariate_death import BivariateDeathParams
from ..models.multistrain_sir import STRAINS, SirParams

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-12

ModelParams = Union[SirParams, BivariateDeathParams]


@dataclass(frozen=True)
class BoundReport:
    """
    lambda(x) against state-free majorants of the rate and of increment sizes.

    ``p3_moment_bound`` = increment bound^2 * rate bound bounds
    E[Z^2 Lambda | X(t) = x] for the path suprema Z and Lambda.
    """

    lambda_at_state: float
    static_lambda_bound: float
    static_increment_bound: float
    p3_moment_bound: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def static_bounds(params: ModelParams) -> Tuple[float, float]:
    """
    (rate bound, increment bound) for a model.

    SIR: every compartment replaced by P, so (m + r + lambda_1max + lambda_2max) P
    and P. Bivariate death: delta (y1(0) + y2(0)) and y1(0) + y2(0).
    """
    if isinstance(params, SirParams):
        forces = sum(params.max_force_of_infection() for _ in STRAINS)
        return (params.m + params.r + forces) * params.P, float(params.P)
    if isinstance(params, BivariateDeathParams):
        initial = params.y1_0 + params.y2_0
        return params.delta * initial, float(initial)
    raise ConfigurationError(f"No static bound for parameters of type {type(params).__name__}")


def check_p3_bound(spec: SystemSpec, state: StateVector, params: ModelParams) -> BoundReport:
    """
    Evaluate lambda(x) and the static bounds, asserting lambda(x) <= bound.

    Raises:
        BoundViolated: If the rate function exceeds its static bound
    """
    rate_bound, increment_bound = static_bounds(params)
    lam = rate_function(spec, state)
    report = BoundReport(
        lambda_at_state=lam,
        static_lambda_bound=rate_bound,
        static_increment_bound=increment_bound,
        p3_moment_bound=increment_bound ** 2 * rate_bound,
    )
    if lam > rate_bound * (1.0 + BOUND_SLACK):
        logger.error(f"Rate {lam!r} exceeds static bound {rate_bound!r} at {state.as_dict()}")
        raise BoundViolated(
            f"{spec.name}: lambda(x) = {lam!r} exceeds static bound {rate_bound!r} at {state.as_dict()}"
        )
    return report
