"""
Closed-form co-jump rates for two death-type transitions under a common gamma noise

Two transitions draining compartments of sizes y1 and y2 at the same
per-capita rate delta, both time-changed by one gamma process with noise
magnitude tau, fire jointly: (k1, k2) individuals leave at rate

    C(y1, k1) C(y2, k2) * sum_j C(n, j) (-1)^(n-j+1) ln(1 + delta tau (m - j)) / tau

with n = k1 + k2 and m = y1 + y2. The alternating sum is the negated n-th
forward difference of j -> ln(1 + delta tau (m - j)) / tau and loses digits
quickly, so it is evaluated either with compensated double-precision
summation (low orders, error estimate checked) or exactly on a fixed-point
logarithm table.
"""

import logging
import math
import sys
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..core.base_family import BaseRateFamily
from ..core.exceptions import (
    ConfigurationError,
    InvalidJumpSize,
    PopulationCapExceeded,
    PrecisionLoss,
)
from ..core.system import JumpEvent, StateVector, TransitionType
from .binomials import PascalTriangle, get_triangle

logger = logging.getLogger(__name__)

DOUBLE_PATH_MAX_ORDER = 25
DOUBLE_PATH_TOLERANCE = 1e-12
PRECISION_LOSS_TOLERANCE = 1e-6
CLAMP_TOLERANCE = 1e-12
GUARD_BITS = 64
MAX_PRECISION_BITS = 1 << 16
RATE_KEY_DIGITS = 12

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class GammaNoiseParams:
    """
    Gamma white noise xi = dGamma/dt with Gamma(t) ~ Gamma(shape t/tau, scale tau).

    E[Gamma(t)] = t and V[Gamma(t)] = tau t.
    """

    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ConfigurationError(f"Noise magnitude tau must be positive and finite, got {self.tau}")

    def shape(self, h: float) -> float:
        """Gamma shape of the increment Gamma(t + h) - Gamma(t)."""
        return h / self.tau


# ---------------------------------------------------------------------------
# Alternating finite differences
# ---------------------------------------------------------------------------

def _neumaier_sum(values: Sequence[float]) -> Tuple[float, float]:
    """Compensated sum; also returns sum of absolute values for the error estimate."""
    total = 0.0
    compensation = 0.0
    magnitude = 0.0
    for value in values:
        magnitude += abs(value)
        t = total + value
        if abs(total) >= abs(value):
            compensation += (total - t) + value
        else:
            compensation += (value - t) + total
        total = t
    return total + compensation, magnitude


def _int_ldexp(value: int, exponent: int) -> float:
    """value * 2**exponent for arbitrarily large integers without overflow."""
    shift = max(abs(value).bit_length() - 64, 0)
    mantissa = float(abs(value) >> shift)
    return math.copysign(math.ldexp(mantissa, exponent + shift), value)


def _fixed_point_logs(indices: Sequence[int], a: float, bits: int) -> List[int]:
    """round(2**bits * ln(1 + a*i)) for each i, each exact to half a unit."""
    with mpmath.workprec(bits + 32):
        scale = mpmath.ldexp(mpmath.mpf(1), bits)
        slope = mpmath.mpf(a)
        return [int(mpmath.nint(mpmath.log1p(slope * i) * scale)) for i in indices]


def _difference_double(n: int, m: int, a: float, triangle: PascalTriangle) -> Tuple[float, float]:
    row = triangle.row(n)
    terms = [
        (-1.0 if (n - j) % 2 == 0 else 1.0) * row[j] * math.log1p(a * (m - j))
        for j in range(n + 1)
    ]
    total, magnitude = _neumaier_sum(terms)
    # one rounding in log1p, one in the product, plus the summation residual
    return total, 4.0 * _EPS * magnitude


def _difference_extended(n: int, m: int, a: float, triangle: PascalTriangle) -> Tuple[int, int]:
    """
    Exact alternating sum on a fixed-point log table.

    Returns:
        (D, bits) with the difference equal to D * 2**-bits up to 2**(n-1) units
    """
    row = triangle.row(n)
    error_units = 1 << max(n - 1, 0)
    bits = GUARD_BITS + n + 64
    while True:
        logs = _fixed_point_logs(range(m - n, m + 1), a, bits)
        # logs[n - j] holds ln(1 + a (m - j))
        value = sum(
            (-row[j] if (n - j) % 2 == 0 else row[j]) * logs[n - j]
            for j in range(n + 1)
        )
        deficit = error_units.bit_length() + 60 - abs(value).bit_length()
        if value > 0 and deficit <= 0:
            return value, bits
        if bits >= MAX_PRECISION_BITS:
            relative = error_units / abs(value) if value else math.inf
            if relative > PRECISION_LOSS_TOLERANCE:
                raise PrecisionLoss(
                    f"Finite difference of order {n} at m={m}, a={a!r} keeps a relative "
                    f"error of {relative:.3g} at {bits} bits"
                )
            return value, bits
        bits = min(MAX_PRECISION_BITS, bits + max(64, deficit if value else bits))


def finite_difference_log(
    n: int,
    m: int,
    delta: float,
    tau: float,
    triangle: Optional[PascalTriangle] = None
) -> float:
    """
    sum_{j=0..n} C(n, j) (-1)^(n-j+1) ln(1 + delta tau (m - j)) / tau.

    Args:
        n: Difference order k1 + k2 (>= 1)
        m: Pooled occupancy y1 + y2 (>= n)
        delta: Per-capita rate
        tau: Noise magnitude
        triangle: Binomial source (shared triangle by default)

    Returns:
        The difference, accurate to about 1e-12 relative

    Raises:
        PrecisionLoss: If no evaluation path reaches 1e-6 relative accuracy
    """
    if n < 1 or m < n:
        raise InvalidJumpSize(f"Need 1 <= n <= m, got n={n}, m={m}")
    if delta < 0 or not tau > 0:
        raise ConfigurationError(f"Need delta >= 0 and tau > 0, got delta={delta}, tau={tau}")
    a = delta * tau
    if a == 0.0:
        return 0.0
    triangle = triangle or get_triangle()

    if n <= DOUBLE_PATH_MAX_ORDER:
        value, error = _difference_double(n, m, a, triangle)
        if error <= DOUBLE_PATH_TOLERANCE * abs(value):
            return value / tau
        logger.debug(f"Order {n} at m={m}: double error {error:.3g} vs {value:.3g}, extending")

    value, bits = _difference_extended(n, m, a, triangle)
    return _int_ldexp(value, -bits) / tau


def _difference_orders(m: int, a: float) -> Tuple[List[int], int]:
    """
    Exact differences of every order 1..m for one pooled occupancy.

    Builds the fixed-point log table once and runs a forward-difference table
    over it, so all orders cost O(m^2) integer subtractions.

    Returns:
        (D, bits) with D[n] * 2**-bits the order-n difference (D[0] unused)
    """
    bits = GUARD_BITS + m + 64
    while True:
        logs = _fixed_point_logs(range(m + 1), a, bits)
        row = logs[::-1]
        orders = [0] * (m + 1)
        for n in range(1, m + 1):
            row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
            orders[n] = -row[0]
        deficit = max(
            (n + 60 - abs(orders[n]).bit_length()) if orders[n] > 0 else bits
            for n in range(1, m + 1)
        ) if m else 0
        if deficit <= 0 or bits >= MAX_PRECISION_BITS:
            return orders, bits
        bits = min(MAX_PRECISION_BITS, bits + max(64, deficit))


# ---------------------------------------------------------------------------
# Rates
# ---------------------------------------------------------------------------

def total_cojump_rate(y1: int, y2: int, delta: float, noise: GammaNoiseParams) -> float:
    """tau^-1 ln(1 + delta tau (y1 + y2)): total rate of all (k1, k2) events."""
    return math.log1p(delta * noise.tau * (y1 + y2)) / noise.tau


def cojump_covariance_closed_form(y1: int, y2: int, delta: float, noise: GammaNoiseParams) -> float:
    """
    y1 y2 tau^-1 ln((1 + delta tau)^2 / (1 + 2 delta tau)).

    The ratio is written as 1 + a^2 / (1 + 2a) so small noise keeps its digits.
    """
    a = delta * noise.tau
    return y1 * y2 * math.log1p(a * a / (1.0 + 2.0 * a)) / noise.tau


def _clamp(rate: float, total: float, where: str) -> float:
    if rate >= 0.0:
        return rate
    if -rate <= CLAMP_TOLERANCE * total:
        logger.warning(f"Clamped negative rate {rate:.3g} to zero at {where}")
        return 0.0
    raise PrecisionLoss(f"Rate {rate!r} at {where} is negative beyond the clamping tolerance")


def pairwise_cojump_rate(
    y1: int,
    y2: int,
    k1: int,
    k2: int,
    delta: float,
    noise: GammaNoiseParams
) -> float:
    """
    Joint rate of k1 first-type and k2 second-type transitions in one event.

    Raises:
        InvalidJumpSize: If (k1, k2) is not admissible for (y1, y2)
    """
    if k1 < 0 or k2 < 0 or (k1 == 0 and k2 == 0):
        raise InvalidJumpSize(f"Jump sizes must be nonnegative and not both zero, got ({k1}, {k2})")
    if k1 > y1 or k2 > y2:
        raise InvalidJumpSize(f"Cannot remove ({k1}, {k2}) from occupancies ({y1}, {y2})")
    triangle = get_triangle()
    difference = finite_difference_log(k1 + k2, y1 + y2, delta, noise.tau, triangle)
    rate = float(triangle.coefficient(y1, k1) * triangle.coefficient(y2, k2)) * difference
    return _clamp(rate, total_cojump_rate(y1, y2, delta, noise), f"y=({y1},{y2}) k=({k1},{k2})")


def univariate_marginal_rate(y: int, k: int, delta: float, noise: GammaNoiseParams) -> float:
    """
    Rate of k simultaneous transitions of a single noisy death-type transition.

    A co-jump member seen alone is a univariate binomial-gamma process, so this
    also equals the member's marginal rate for any partner occupancy.
    """
    if k < 1 or k > y:
        raise InvalidJumpSize(f"Need 1 <= k <= y, got k={k}, y={y}")
    triangle = get_triangle()
    rate = float(triangle.coefficient(y, k)) * finite_difference_log(k, y, delta, noise.tau, triangle)
    return _clamp(rate, total_cojump_rate(y, 0, delta, noise), f"y={y} k={k}")


@dataclass(frozen=True, eq=False)
class PairwiseRateTable:
    """
    All pairwise rates of one co-jump family at one state.

    ``rates[k1, k2]`` is the joint rate; ``rates[0, 0]`` is zero.
    ``min_scaled_difference`` is the most negative order difference before
    clamping, times C(m, n) and divided by the total rate (0 when none is negative).
    """

    y1: int
    y2: int
    delta: float
    tau: float
    rates: np.ndarray = field(repr=False)
    min_scaled_difference: float = 0.0

    @classmethod
    def build(
        cls,
        y1: int,
        y2: int,
        delta: float,
        noise: GammaNoiseParams,
        triangle: Optional[PascalTriangle] = None
    ) -> 'PairwiseRateTable':
        """
        Enumerate every admissible (k1, k2) eagerly.

        Raises:
            PopulationCapExceeded: If a source occupancy exceeds the cap
            PrecisionLoss: If a difference cannot be resolved
        """
        triangle = triangle or get_triangle()
        cap = triangle.max_order // 2
        if y1 < 0 or y2 < 0:
            raise InvalidJumpSize(f"Occupancies must be nonnegative, got ({y1}, {y2})")
        if y1 > cap or y2 > cap:
            raise PopulationCapExceeded(f"Occupancies ({y1}, {y2}) exceed the population cap {cap}")

        m = y1 + y2
        a = delta * noise.tau
        rates = np.zeros((y1 + 1, y2 + 1), dtype=float)
        min_scaled_difference = 0.0
        if m > 0 and a > 0.0:
            total = total_cojump_rate(y1, y2, delta, noise)
            orders, bits = _difference_orders(m, a)
            log_difference = np.full(m + 1, -np.inf)
            shift = bits * math.log(2.0) + math.log(noise.tau)
            for n in range(1, m + 1):
                value = orders[n]
                if value > 0:
                    log_difference[n] = math.log(value) - shift
                    continue
                magnitude = _int_ldexp(-value, -bits) / noise.tau * triangle.coefficient(m, n)
                min_scaled_difference = min(min_scaled_difference, -magnitude / total)
                _clamp(-magnitude, total, f"m={m} order={n}")

            order_index = np.add.outer(np.arange(y1 + 1), np.arange(y2 + 1))
            log_rates = (
                triangle.log_row(y1)[:, None]
                + triangle.log_row(y2)[None, :]
                + log_difference[order_index]
            )
            rates = np.exp(log_rates)
            rates[0, 0] = 0.0
        rates.setflags(write=False)
        logger.debug(f"Built rate table y=({y1},{y2}) delta={delta!r} tau={noise.tau!r}")
        return cls(y1, y2, float(delta), float(noise.tau), rates, min_scaled_difference)

    @cached_property
    def total(self) -> float:
        return math.fsum(self.rates.ravel())

    @cached_property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.rates.ravel())

    def rate(self, k1: int, k2: int) -> float:
        if not (0 <= k1 <= self.y1 and 0 <= k2 <= self.y2):
            raise InvalidJumpSize(f"({k1}, {k2}) outside table of ({self.y1}, {self.y2})")
        return float(self.rates[k1, k2])

    def items(self) -> Iterator[Tuple[Tuple[int, int], float]]:
        """Iterate over ((k1, k2), rate) for every admissible pair."""
        for k1 in range(self.y1 + 1):
            for k2 in range(self.y2 + 1):
                if k1 or k2:
                    yield (k1, k2), float(self.rates[k1, k2])

    def marginal(self, member: int, k: int) -> float:
        """Rate of events moving exactly ``k`` from the first (0) or second (1) source."""
        if member == 0:
            return math.fsum(self.rates[k, :]) if 1 <= k <= self.y1 else 0.0
        return math.fsum(self.rates[:, k]) if 1 <= k <= self.y2 else 0.0

    def mean_increment(self, member: int) -> float:
        """sum_k k q for one member."""
        sizes = np.arange(self.rates.shape[member], dtype=float)
        weights = sizes[:, None] if member == 0 else sizes[None, :]
        return math.fsum((weights * self.rates).ravel())

    def second_moment(self, member: int) -> float:
        """sum_k k^2 q for one member."""
        sizes = np.arange(self.rates.shape[member], dtype=float) ** 2
        weights = sizes[:, None] if member == 0 else sizes[None, :]
        return math.fsum((weights * self.rates).ravel())

    def probabilities(self) -> np.ndarray:
        total = self.cumulative[-1]
        return self.rates / total if total > 0 else np.zeros_like(self.rates)

    def sample_sizes(self, generator: np.random.Generator) -> Tuple[int, int]:
        """Draw (k1, k2) with probability proportional to its rate (inverse CDF)."""
        cumulative = self.cumulative
        if cumulative[-1] <= 0.0:
            raise InvalidJumpSize(f"Empty rate table for ({self.y1}, {self.y2})")
        u = generator.random() * cumulative[-1]
        index = int(np.searchsorted(cumulative, u, side='right'))
        index = min(index, cumulative.size - 1)
        k1, k2 = divmod(index, self.y2 + 1)
        return k1, k2


def covariance_by_rate_summation(table: PairwiseRateTable) -> float:
    """
    Infinitesimal covariance as the weighted rate sum sum_k k1 k2 q(x, k).
    """
    k1 = np.arange(table.y1 + 1, dtype=float)[:, None]
    k2 = np.arange(table.y2 + 1, dtype=float)[None, :]
    return math.fsum((k1 * k2 * table.rates).ravel())


# ---------------------------------------------------------------------------
# Table memo
# ---------------------------------------------------------------------------

def quantize_rate(value: float) -> float:
    """Round a per-capita rate to the digits used as the table memo key."""
    return float(f"{value:.{RATE_KEY_DIGITS}g}")


class RateTableCache:
    """
    Bounded LRU memo of PairwiseRateTable keyed by (y1, y2, quantized rate, tau).

    Tables are immutable, so a shared instance is safe to read from several
    threads; insertion is serialized by a lock.
    """

    def __init__(self, maxsize: int = 4096):
        self.maxsize = maxsize
        self.hits = 0
        self.misses = 0
        self._tables: 'OrderedDict[tuple, PairwiseRateTable]' = OrderedDict()
        self._lock = threading.Lock()
        self.logger = logging.getLogger(self.__class__.__name__)

    def get(self, y1: int, y2: int, delta: float, noise: GammaNoiseParams) -> PairwiseRateTable:
        key = (y1, y2, quantize_rate(delta), noise.tau)
        with self._lock:
            table = self._tables.get(key)
            if table is not None:
                self._tables.move_to_end(key)
                self.hits += 1
                return table
            self.misses += 1
        table = PairwiseRateTable.build(y1, y2, key[2], noise)
        with self._lock:
            self._tables[key] = table
            while len(self._tables) > self.maxsize:
                self._tables.popitem(last=False)
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()
            self.hits = self.misses = 0

    def stats(self) -> dict:
        return {'hits': self.hits, 'misses': self.misses, 'size': len(self._tables)}


_cache: Optional[RateTableCache] = None


def get_table_cache() -> RateTableCache:
    """Process-wide table memo sized from settings."""
    global _cache
    if _cache is None:
        from ..config import get_settings
        _cache = RateTableCache(maxsize=get_settings().table_cache_size)
    return _cache


# ---------------------------------------------------------------------------
# Family
# ---------------------------------------------------------------------------

class CoJumpFamily(BaseRateFamily):
    """
    Two transitions sharing one gamma noise and one per-capita rate.

    Each transition drains its own source compartment; the per-capita rate is
    a state-dependent callable evaluated fresh at every event.
    """

    def __init__(
        self,
        first: TransitionType,
        second: TransitionType,
        per_capita_rate: Callable[[StateVector], float],
        noise: GammaNoiseParams,
        name: Optional[str] = None
    ):
        """
        Initialize the family.

        Args:
            first: Transition draining the first source compartment
            second: Transition draining the second source compartment
            per_capita_rate: Common per-individual rate, picklable callable of the state
            noise: Shared gamma noise
            name: Label for logs and trajectories
        """
        if first == second:
            raise ConfigurationError(f"Co-jump family needs two distinct transitions, got {first} twice")
        if first.source == second.source:
            raise ConfigurationError(f"Co-jump members {first} and {second} drain the same compartment")
        super().__init__(name or f"cojump:{first}|{second}")
        self.first = first
        self.second = second
        self.per_capita_rate = per_capita_rate
        self.noise = noise

    @property
    def transitions(self) -> Tuple[TransitionType, ...]:
        return (self.first, self.second)

    @property
    def source_of_first(self) -> str:
        return self.first.source

    @property
    def source_of_second(self) -> str:
        return self.second.source

    def occupancies(self, state: StateVector) -> Tuple[int, int, float]:
        """(y1, y2, per-capita rate) at ``state``."""
        delta = float(self.per_capita_rate(state))
        if delta < 0 or not math.isfinite(delta):
            raise ConfigurationError(f"Per-capita rate of {self.name} is {delta!r}")
        return state[self.source_of_first], state[self.source_of_second], delta

    def table(self, state: StateVector) -> PairwiseRateTable:
        y1, y2, delta = self.occupancies(state)
        return get_table_cache().get(y1, y2, delta, self.noise)

    def total_rate(self, state: StateVector) -> float:
        y1, y2, delta = self.occupancies(state)
        return total_cojump_rate(y1, y2, delta, self.noise)

    def _member(self, transition: TransitionType) -> int:
        return 0 if transition == self.first else 1

    def marginal_rate(self, state: StateVector, transition: TransitionType, k: int) -> float:
        return self.table(state).marginal(self._member(transition), k)

    def mean_increment_rate(self, state: StateVector, transition: TransitionType) -> float:
        return self.table(state).mean_increment(self._member(transition))

    def cross_increment_rate(
        self,
        state: StateVector,
        first: TransitionType,
        second: TransitionType
    ) -> float:
        if not (self.covers(first) and self.covers(second)):
            return 0.0
        table = self.table(state)
        if first == second:
            return table.second_moment(self._member(first))
        return covariance_by_rate_summation(table)

    def sample(self, state: StateVector, generator: np.random.Generator) -> JumpEvent:
        k1, k2 = self.table(state).sample_sizes(generator)
        increments = {}
        if k1:
            increments[self.first] = k1
        if k2:
            increments[self.second] = k2
        return JumpEvent.from_increments(increments, state.compartments, self.name, (k1, k2))

