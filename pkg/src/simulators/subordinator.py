"""
Gamma-subordinated bivariate death: the random-time construction N(Gamma(t))
"""

from typing import Tuple, Union

import numpy as np

from ..core.exceptions import ConfigurationError
from ..rates.cojump import GammaNoiseParams
from .rng import RngStream


def _validate(y0: Tuple[int, int], delta: float, h: float) -> None:
    if len(y0) != 2 or min(y0) < 0:
        raise ConfigurationError(f"Initial populations must be two nonnegative integers, got {y0}")
    if delta < 0:
        raise ConfigurationError(f"Death rate must be nonnegative, got {delta}")
    if not h > 0:
        raise ConfigurationError(f"Step h must be positive, got {h}")


def sample_subordinated_bivariate_death(
    y0: Tuple[int, int],
    delta: float,
    noise: GammaNoiseParams,
    h: float,
    size: int,
    rng: Union[RngStream, np.random.Generator]
) -> np.ndarray:
    """
    Draw ``size`` independent one-step death counts over [0, h].

    Each draw takes one gamma time increment g ~ Gamma(h / tau, tau) shared by
    both populations, then d_i ~ Binomial(y_i, 1 - exp(-delta g)).

    Returns:
        Integer array of shape (size, 2)
    """
    _validate(y0, delta, h)
    generator = rng.generator() if isinstance(rng, RngStream) else rng
    elapsed = generator.gamma(shape=noise.shape(h), scale=noise.tau, size=size)
    death_probability = -np.expm1(-delta * elapsed)
    deaths = np.empty((size, 2), dtype=np.int64)
    deaths[:, 0] = generator.binomial(int(y0[0]), death_probability)
    deaths[:, 1] = generator.binomial(int(y0[1]), death_probability)
    return deaths


def simulate_subordinated_bivariate_death(
    y0: Tuple[int, int],
    delta: float,
    noise: GammaNoiseParams,
    h: float,
    rng: Union[RngStream, np.random.Generator]
) -> Tuple[int, int]:
    """
    One-step death counts (d1, d2) of two linear death processes run on a
    common gamma clock.

    Args:
        y0: Initial populations (y1, y2)
        delta: Per-capita death rate
        noise: Gamma noise driving the shared clock
        h: Step length
        rng: Stream or generator

    Returns:
        (d1, d2)
    """
    d1, d2 = sample_subordinated_bivariate_death(y0, delta, noise, h, 1, rng)[0]
    return int(d1), int(d2)
