"""
Monte Carlo estimation of infinitesimal means and covariances of counting processes
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config import get_settings
from ..core.exceptions import ConfigurationError, InsufficientReplicates, StepTooLarge, UnknownTransition
from ..core.system import StateVector, SystemSpec, TransitionType, rate_function
from ..simulators.gillespie import simulate_increments
from ..simulators.rng import RngStream

logger = logging.getLogger(__name__)

MIN_REPLICATES = 1000
MAX_STEP_INTENSITY = 0.1
ABSORBED_STEP = 1.0

KINDS = ('mean', 'variance', 'covariance')


@dataclass(frozen=True)
class MomentEstimate:
    """Estimate of an infinitesimal moment over step ``h``."""

    value: float
    std_error: float
    replicates: int
    h: float
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"Unknown moment kind {self.kind!r}")
        if self.replicates < 2:
            raise InsufficientReplicates(f"An estimate needs at least 2 replicates, got {self.replicates}")

    def z_score(self, target: float) -> float:
        """(value - target) / std_error; 0 or inf when the error is zero."""
        if self.std_error > 0:
            return (self.value - target) / self.std_error
        return 0.0 if self.value == target else math.inf

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.z_score(target)) <= sigmas


def state_hash(state: StateVector) -> str:
    """Short stable digest of a state, used to key estimation reports."""
    payload = json.dumps(state.as_dict(), sort_keys=True).encode('utf-8')
    return hashlib.sha256(payload).hexdigest()[:12]


def default_step(spec: SystemSpec, state: StateVector, intensity: Optional[float] = None) -> float:
    """
    Step h with lambda(x) h equal to ``intensity`` (STEP_TARGET by default).

    The O(h) bias of the finite-step moments then stays below the Monte
    Carlo noise at desk-scale replicate counts.
    """
    intensity = intensity or get_settings().step_target
    total = rate_function(spec, state)
    return intensity / total if total > 0 else ABSORBED_STEP


def _check_inputs(
    spec: SystemSpec,
    state: StateVector,
    transitions: Tuple[TransitionType, ...],
    h: float,
    replicates: int
) -> None:
    unknown = [str(t) for t in transitions if t not in spec.transitions]
    if unknown:
        raise UnknownTransition(f"Transitions {unknown} are not part of system {spec.name}")
    if not (math.isfinite(h) and h > 0):
        raise ConfigurationError(f"Step h must be positive and finite, got {h}")
    if replicates < MIN_REPLICATES:
        raise InsufficientReplicates(
            f"Moment estimation needs at least {MIN_REPLICATES} replicates, got {replicates}"
        )
    intensity = h * rate_function(spec, state)
    if intensity > MAX_STEP_INTENSITY:
        raise StepTooLarge(
            f"h * lambda(x) = {intensity:.4g} exceeds {MAX_STEP_INTENSITY}; use h <= "
            f"{MAX_STEP_INTENSITY / (intensity / h):.4g}"
        )


def _batches(replicates: int) -> int:
    return max(2, min(get_settings().moment_batches, replicates // 2))


def expected_infinitesimal_mean(spec: SystemSpec, state: StateVector, transition: TransitionType) -> float:
    """sum_k k q_ij(x, k), summed family by family."""
    return math.fsum(
        family.mean_increment_rate(state, transition)
        for family in spec.families
        if family.covers(transition)
    )


def expected_infinitesimal_covariance(
    spec: SystemSpec,
    state: StateVector,
    pair: Tuple[TransitionType, TransitionType]
) -> float:
    """
    sum_k k_a k_b q(x, k) over every family that increments both transitions.

    Unit families contribute only when they count both transitions in one
    event (a death paired with its replacement birth); co-jump families
    contribute their weighted pairwise rate sum.
    """
    first, second = pair
    return math.fsum(
        family.cross_increment_rate(state, first, second)
        for family in spec.families
        if family.covers(first) and family.covers(second)
    )


def estimate_infinitesimal_mean(
    spec: SystemSpec,
    state: StateVector,
    transition: TransitionType,
    h: float,
    replicates: int,
    rng: RngStream,
    workers: Optional[int] = None
) -> MomentEstimate:
    """
    Estimate lim h^-1 E[N_ij(t + h) - N_ij(t) | X(t) = x].

    Raises:
        StepTooLarge: If h lambda(x) > 0.1
        InsufficientReplicates: If fewer than 1000 replicates are requested
    """
    _check_inputs(spec, state, (transition,), h, replicates)
    increments = simulate_increments(spec, state, h, (transition,), replicates, rng, workers)
    values = increments[:, 0].astype(float)
    estimate = MomentEstimate(
        value=float(values.mean()) / h,
        std_error=float(values.std(ddof=1)) / math.sqrt(replicates) / h,
        replicates=replicates,
        h=h,
        kind='mean',
    )
    logger.debug(f"Mean of {transition} at h={h:.4g}: {estimate.value:.6g} +/- {estimate.std_error:.3g}")
    return estimate


def covariance_with_batch_error(a: np.ndarray, b: np.ndarray, batches: int) -> Tuple[float, float]:
    """
    Sample covariance and its standard error.

    The error comes from the delta method applied to batch means of
    (a, b, ab): each batch is linearized around the overall means as
    mean(ab) - mean(b) mean_k(a) - mean(a) mean_k(b).
    """
    n = a.size
    mean_a, mean_b = a.mean(), b.mean()
    covariance = float(np.dot(a - mean_a, b - mean_b)) / (n - 1)

    linearized = np.array([
        (xa * xb).mean() - mean_b * xa.mean() - mean_a * xb.mean()
        for xa, xb in zip(np.array_split(a, batches), np.array_split(b, batches))
    ])
    std_error = float(linearized.std(ddof=1)) / math.sqrt(batches)
    return covariance, std_error


def estimate_infinitesimal_covariance(
    spec: SystemSpec,
    state: StateVector,
    pair: Tuple[TransitionType, TransitionType],
    h: float,
    replicates: int,
    rng: RngStream,
    workers: Optional[int] = None
) -> MomentEstimate:
    """
    Estimate lim h^-1 Cov[dN_a, dN_b | X(t) = x] from one-step increments.

    A pair naming the same transition twice gives the infinitesimal variance.

    Raises:
        StepTooLarge: If h lambda(x) > 0.1
        InsufficientReplicates: If fewer than 1000 replicates are requested
    """
    first, second = pair
    _check_inputs(spec, state, (first, second), h, replicates)
    increments = simulate_increments(spec, state, h, (first, second), replicates, rng, workers)
    a = increments[:, 0].astype(float)
    b = increments[:, 1].astype(float)
    covariance, std_error = covariance_with_batch_error(a, b, _batches(replicates))
    estimate = MomentEstimate(
        value=covariance / h,
        std_error=std_error / h,
        replicates=replicates,
        h=h,
        kind='variance' if first == second else 'covariance',
    )
    if estimate.std_error == 0.0:
        logger.warning(f"Degenerate covariance estimate for {first}, {second}: no joint variation observed")
    logger.debug(f"Covariance of {first}, {second} at h={h:.4g}: {estimate.value:.6g} +/- {estimate.std_error:.3g}")
    return estimate
