"""
Exact one-step distribution of the gamma-subordinated bivariate death process

Given the gamma clock increment g over [0, h], the two populations die
independently with probability p = 1 - exp(-delta g), so

    P(d1, d2) = C(y1, d1) C(y2, d2) E[p^d (1 - p)^(y - d)],  d = d1 + d2, y = y1 + y2.

Only y + 1 expectations are needed. They are computed by adaptive quadrature
against the gamma density, and independently from the Laplace transform
E[exp(-delta g j)] = (1 + delta tau j)^(-h / tau) in extended precision.
"""

import logging
import math
import warnings
from typing import Callable, Dict, Tuple

import mpmath
from scipy import integrate

from ..core.exceptions import ConfigurationError, QuadratureFailure
from ..rates.binomials import binomial
from ..rates.cojump import GammaNoiseParams

logger = logging.getLogger(__name__)

MAX_ORACLE_POPULATION = 30
ABSOLUTE_TOLERANCE = 1e-10
NORMALIZATION_TOLERANCE = 1e-8
QUADRATURE_LIMIT = 200
LAPLACE_DIGITS = 40

OneStepDistribution = Dict[Tuple[int, int], float]


def _validate(y0: Tuple[int, int], delta: float, h: float) -> Tuple[int, int]:
    y1, y2 = (int(v) for v in y0)
    if y1 < 0 or y2 < 0:
        raise ConfigurationError(f"Populations must be nonnegative, got {y0}")
    if max(y1, y2) > MAX_ORACLE_POPULATION:
        raise ConfigurationError(
            f"Oracle populations are limited to {MAX_ORACLE_POPULATION} each, got {y0}"
        )
    if delta < 0:
        raise ConfigurationError(f"delta must be nonnegative, got {delta}")
    if not h > 0:
        raise ConfigurationError(f"Step h must be positive, got {h}")
    return y1, y2


def _integrate(integrand: Callable[[float], float], lower: float, upper: float) -> Tuple[float, float]:
    """Adaptive Gauss-Kronrod; convergence is judged on the returned error estimate."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', integrate.IntegrationWarning)
        value, error = integrate.quad(
            integrand, lower, upper,
            epsabs=0.0, epsrel=1e-11, limit=QUADRATURE_LIMIT,
        )
    for warning in caught:
        logger.debug(f"Quadrature on [{lower}, {upper}]: {warning.message}")
    if not (math.isfinite(value) and math.isfinite(error)):
        raise QuadratureFailure(f"Quadrature on [{lower}, {upper}] returned {value!r} +/- {error!r}")
    return value, error


def _gamma_expectation(log_weight: Callable[[float], float], shape: float) -> Tuple[float, float]:
    """
    E[exp(log_weight(W))] for W ~ Gamma(shape, 1), split at W = 1.

    ``log_weight`` returns -inf where the weight vanishes.
    """
    log_norm = math.lgamma(shape)

    def integrand(w: float) -> float:
        if w <= 0.0:
            return 0.0
        log_value = log_weight(w)
        if log_value == -math.inf:
            return 0.0
        return math.exp(log_value + (shape - 1.0) * math.log(w) - w - log_norm)

    head, head_error = _integrate(integrand, 0.0, 1.0)
    tail, tail_error = _integrate(integrand, 1.0, math.inf)
    return head + tail, head_error + tail_error


def _death_moment(d: int, y: int, a: float, shape: float) -> Tuple[float, float]:
    """
    E[p^d (1 - p)^(y - d)] with p = 1 - exp(-a W), W ~ Gamma(shape, 1).

    For d = 0 the integrand does not vanish at the origin, where the density
    is singular when shape < 1; it is taken as 1 - E[1 - (1 - p)^y], whose
    integrand vanishes like W^shape.
    """
    if d == 0:
        if y == 0:
            return 1.0, 0.0

        def log_complement(w: float) -> float:
            q = -math.expm1(-a * y * w)
            return math.log(q) if q > 0.0 else -math.inf

        complement, error = _gamma_expectation(log_complement, shape)
        return 1.0 - complement, error

    def log_weight(w: float) -> float:
        p = -math.expm1(-a * w)
        if p <= 0.0:
            return -math.inf
        return d * math.log(p) - a * w * (y - d)

    return _gamma_expectation(log_weight, shape)


def one_step_distribution_oracle(
    y0: Tuple[int, int],
    delta: float,
    noise: GammaNoiseParams,
    h: float
) -> OneStepDistribution:
    """
    P(d1, d2) of one-step death counts over [0, h] by adaptive quadrature.

    Args:
        y0: Initial populations, at most 30 each
        delta: Per-capita death rate
        noise: Gamma noise of the shared clock
        h: Step length

    Returns:
        Mapping (d1, d2) -> probability over the full support

    Raises:
        QuadratureFailure: If a cell misses the 1e-10 absolute tolerance or
            the distribution does not sum to 1 within 1e-8
    """
    y1, y2 = _validate(y0, delta, h)
    y = y1 + y2
    if y == 0 or delta == 0.0:
        return {(d1, d2): float(d1 == 0 and d2 == 0) for d1 in range(y1 + 1) for d2 in range(y2 + 1)}

    a = delta * noise.tau
    shape = noise.shape(h)
    moments = [_death_moment(d, y, a, shape) for d in range(y + 1)]

    distribution: OneStepDistribution = {}
    for d1 in range(y1 + 1):
        for d2 in range(y2 + 1):
            moment, error = moments[d1 + d2]
            weight = binomial(y1, d1) * binomial(y2, d2)
            if weight * error > ABSOLUTE_TOLERANCE:
                raise QuadratureFailure(
                    f"Cell ({d1}, {d2}) has error estimate {weight * error:.3g} above {ABSOLUTE_TOLERANCE}"
                )
            distribution[(d1, d2)] = max(weight * moment, 0.0)

    total = math.fsum(distribution.values())
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise QuadratureFailure(f"One-step distribution sums to {total!r}")
    logger.debug(f"Oracle y0=({y1},{y2}) delta={delta} tau={noise.tau} h={h}: normalization {total!r}")
    return distribution


def one_step_distribution_laplace(
    y0: Tuple[int, int],
    delta: float,
    noise: GammaNoiseParams,
    h: float
) -> OneStepDistribution:
    """
    P(d1, d2) from the gamma Laplace transform:

        C(y1, d1) C(y2, d2) sum_i C(d, i) (-1)^i (1 + delta tau (y - d + i))^(-h / tau)

    The alternating sum cancels heavily, so it runs in mpmath at
    LAPLACE_DIGITS plus one digit per individual.
    """
    y1, y2 = _validate(y0, delta, h)
    y = y1 + y2
    distribution: OneStepDistribution = {}
    with mpmath.workdps(LAPLACE_DIGITS + y):
        a = mpmath.mpf(delta) * mpmath.mpf(noise.tau)
        shape = mpmath.mpf(h) / mpmath.mpf(noise.tau)
        laplace = [mpmath.power(1 + a * j, -shape) for j in range(y + 1)]
        moments = [
            mpmath.fsum(
                (-1) ** i * mpmath.binomial(d, i) * laplace[y - d + i]
                for i in range(d + 1)
            )
            for d in range(y + 1)
        ]
        for d1 in range(y1 + 1):
            for d2 in range(y2 + 1):
                value = binomial(y1, d1) * binomial(y2, d2) * moments[d1 + d2]
                distribution[(d1, d2)] = float(value)
    return distribution


def total_variation(first: Dict, second: Dict) -> float:
    """Total-variation distance between two distributions on a discrete support."""
    support = set(first) | set(second)
    return 0.5 * math.fsum(abs(first.get(k, 0.0) - second.get(k, 0.0)) for k in support)
