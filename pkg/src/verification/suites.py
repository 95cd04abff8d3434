"""
Verification suites: rate identities, time-change oracle, Monte Carlo moments and rate bounds
"""

import itertools
import math
from collections import Counter
from dataclasses import replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Type

import numpy as np
from scipy import stats

from ..core.base_suite import BaseSuite, CheckResult
from ..core.exceptions import BoundViolated, ConfigurationError, InsufficientReplicates, PrecisionLoss
from ..core.system import StateVector, marginal_rate, rate_function
from ..estimators.bounds import ModelParams, check_p3_bound, static_bounds
from ..estimators.moments import (
    MIN_REPLICATES,
    default_step,
    estimate_infinitesimal_covariance,
    estimate_infinitesimal_mean,
    expected_infinitesimal_covariance,
    expected_infinitesimal_mean,
)
from ..estimators.oracle import (
    one_step_distribution_laplace,
    one_step_distribution_oracle,
    total_variation,
)
from ..models import bivariate_death, multistrain_sir
from ..models.bivariate_death import BivariateDeathParams, bivariate_death_system
from ..models.multistrain_sir import SirParams, multistrain_sir_system
from ..rates.cojump import (
    CLAMP_TOLERANCE,
    GammaNoiseParams,
    PairwiseRateTable,
    cojump_covariance_closed_form,
    covariance_by_rate_summation,
    pairwise_cojump_rate,
    total_cojump_rate,
    univariate_marginal_rate,
)
from ..simulators.gillespie import GillespieSimulator, simulate_increments
from ..simulators.rng import RngStream
from ..simulators.subordinator import sample_subordinated_bivariate_death

GRID_RATES = (0.1, 0.5, 1.0, 2.0)
GRID_MAX_POPULATION = 12
LARGE_POPULATIONS = (50, 100, 200, 300)
NEAR_ZERO_TAU = 1e-6
MIN_EXPECTED_COUNT = 5.0
P_VALUE_FLOOR = 1e-3
TV_TOLERANCE = 0.01
SIGMAS = 3.0

DEFAULT_SIR = SirParams(P=200, beta=1.5, omega=0.01, alpha=1.0, m=0.02, r=0.5, gamma=0.0, tau=0.2)
DEFAULT_BIVARIATE = BivariateDeathParams(y1_0=20, y2_0=20, delta=0.5, tau=0.2)


def _case(**fields) -> str:
    return ' '.join(f"{key}={value}" for key, value in fields.items())


def _pool(expected: np.ndarray, *observed: np.ndarray) -> Tuple[np.ndarray, ...]:
    """Merge every cell with expected count below MIN_EXPECTED_COUNT into one cell."""
    keep = expected >= MIN_EXPECTED_COUNT
    pooled = []
    for column in (expected,) + observed:
        merged = column[keep]
        rest = column[~keep].sum()
        if rest > 0:
            merged = np.append(merged, rest)
        pooled.append(merged)
    return tuple(pooled)


def chisquare_goodness_of_fit(observed: Mapping, probabilities: Mapping) -> float:
    """p-value of observed cell counts against probabilities, sparse cells pooled."""
    support = sorted(set(probabilities) | set(observed))
    counts = np.array([observed.get(cell, 0) for cell in support], dtype=float)
    weights = np.array([probabilities.get(cell, 0.0) for cell in support], dtype=float)
    expected = counts.sum() * weights / weights.sum()
    expected, counts = _pool(expected, counts)
    if expected.size < 2:
        return 1.0
    return float(stats.chisquare(counts, expected).pvalue)


def chisquare_two_sample(first: Mapping, second: Mapping) -> float:
    """p-value of a two-sample chi-square homogeneity test, sparse cells pooled."""
    support = sorted(set(first) | set(second))
    a = np.array([first.get(cell, 0) for cell in support], dtype=float)
    b = np.array([second.get(cell, 0) for cell in support], dtype=float)
    # smallest expected count of a column is its total times the smaller sample share
    share = min(a.sum(), b.sum()) / (a.sum() + b.sum())
    _, a, b = _pool((a + b) * share, a, b)
    if a.size < 2:
        return 1.0
    return float(stats.chi2_contingency(np.vstack([a, b]), correction=False)[1])


def empirical_distribution(samples: np.ndarray) -> Dict[Tuple[int, int], float]:
    counts = Counter(map(tuple, samples.tolist()))
    n = samples.shape[0]
    return {cell: count / n for cell, count in counts.items()}


class IdentitiesSuite(BaseSuite):
    """
    Closed-form identities of the pairwise co-jump rates, checked by brute
    force over the rate tables.
    """

    name = 'identities'

    def __init__(
        self,
        max_population: int = GRID_MAX_POPULATION,
        rates: Sequence[float] = GRID_RATES,
        large_populations: Sequence[int] = LARGE_POPULATIONS
    ):
        super().__init__()
        self.max_population = max_population
        self.rates = tuple(rates)
        self.large_populations = tuple(large_populations)

    def run(self) -> List[CheckResult]:
        for delta, tau in itertools.product(self.rates, self.rates):
            self._grid(delta, GammaNoiseParams(tau))
        self._large_populations()
        self._marginal_consistency()
        self._independence_limit()
        self._noiseless_limit()
        self.logger.info(f"Identities: {sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return self.results

    def _grid(self, delta: float, noise: GammaNoiseParams) -> None:
        worst_negative = 0.0
        worst_asymmetry = 0.0
        tables: Dict[Tuple[int, int], PairwiseRateTable] = {}
        for y1, y2 in itertools.product(range(self.max_population + 1), repeat=2):
            case = _case(y1=y1, y2=y2, delta=delta, tau=noise.tau)
            try:
                table = PairwiseRateTable.build(y1, y2, delta, noise)
            except PrecisionLoss as e:
                self.logger.error(f"Rate table failed at {case}: {e}")
                self.check_at_least('nonnegativity', case, -math.inf, -CLAMP_TOLERANCE)
                continue
            tables[(y1, y2)] = table
            self.check_relative('covariance_by_summation', case, covariance_by_rate_summation(table),
                                cojump_covariance_closed_form(y1, y2, delta, noise), 1e-8)
            self.check_relative('normalization', case, table.total,
                                total_cojump_rate(y1, y2, delta, noise), 1e-9)
            worst_negative = min(worst_negative, table.min_scaled_difference)

        for (y1, y2), table in tables.items():
            if (y2, y1) not in tables:
                continue
            mirror = tables[(y2, y1)].rates.T
            scale = np.maximum(np.abs(table.rates), 1e-300)
            worst_asymmetry = max(worst_asymmetry, float(np.max(np.abs(table.rates - mirror) / scale)))

        case = _case(delta=delta, tau=noise.tau, y_max=self.max_population)
        self.check_at_least('nonnegativity', case, worst_negative, -CLAMP_TOLERANCE)
        self.check_at_most('symmetry', case, worst_asymmetry, 1e-12)

    def _large_populations(self) -> None:
        noise = GammaNoiseParams(1.0)
        for pooled in self.large_populations:
            y1, y2 = pooled // 2, pooled - pooled // 2
            table = PairwiseRateTable.build(y1, y2, 1.0, noise)
            self.check_relative('normalization_large', _case(y1=y1, y2=y2, delta=1.0, tau=1.0),
                                table.total, total_cojump_rate(y1, y2, 1.0, noise), 1e-9)

    def _marginal_consistency(self) -> None:
        for delta, tau in ((0.5, 0.5), (1.0, 1.0), (2.0, 0.1)):
            noise = GammaNoiseParams(tau)
            for y1, y2 in ((1, 0), (1, 1), (3, 4), (6, 2), (8, 8)):
                table = PairwiseRateTable.build(y1, y2, delta, noise)
                for k in range(1, y1 + 1):
                    self.check_relative('marginal_consistency',
                                        _case(y1=y1, y2=y2, k=k, delta=delta, tau=tau),
                                        table.marginal(0, k),
                                        univariate_marginal_rate(y1, k, delta, noise), 1e-9)

    def _independence_limit(self) -> None:
        noise = GammaNoiseParams(NEAR_ZERO_TAU)
        for delta in self.rates:
            for y1, y2 in ((1, 1), (5, 3), (12, 12)):
                case = _case(y1=y1, y2=y2, delta=delta, tau=NEAR_ZERO_TAU)
                self.check_relative('independence_single', case,
                                    pairwise_cojump_rate(y1, y2, 1, 0, delta, noise), delta * y1, 1e-4)
                self.check_at_most('independence_pair', case,
                                   pairwise_cojump_rate(y1, y2, 1, 1, delta, noise),
                                   2 * delta ** 2 * NEAR_ZERO_TAU * y1 * y2, 1e-3)
                self.check_relative('independence_covariance', case,
                                    cojump_covariance_closed_form(y1, y2, delta, noise) / NEAR_ZERO_TAU,
                                    y1 * y2 * delta ** 2, 1e-3)

    def _noiseless_limit(self) -> None:
        noisy = multistrain_sir_system(replace(DEFAULT_SIR, tau=NEAR_ZERO_TAU))
        plain = multistrain_sir_system(replace(DEFAULT_SIR, tau=None))
        states = (
            multistrain_sir.initial_state(DEFAULT_SIR),
            noisy.make_state({'S': 120, 'I1': 20, 'I2': 10, 'S1': 20, 'S2': 15, 'I1*': 5, 'R': 10}),
        )
        for state in states:
            for strain in multistrain_sir.STRAINS:
                for transition in (multistrain_sir.infection(strain), multistrain_sir.reinfection(strain)):
                    self.check_relative('noiseless_marginal',
                                        _case(transition=transition, state=state.counts),
                                        marginal_rate(noisy, state, transition, 1),
                                        marginal_rate(plain, state, transition, 1), 1e-3)


class OracleSuite(BaseSuite):
    """
    The co-jump simulator against the gamma time-change construction it
    integrates out.
    """

    name = 'oracle'
    min_replicates = 10_000

    def __init__(
        self,
        seed: int,
        replicates: int = 100_000,
        y0: Tuple[int, int] = (5, 5),
        delta: float = 0.5,
        tau: float = 0.5,
        h: float = 0.1,
        workers: Optional[int] = None
    ):
        super().__init__()
        if replicates < self.min_replicates:
            raise InsufficientReplicates(
                f"The oracle suite needs at least {self.min_replicates} replicates, got {replicates}"
            )
        self.seed = seed
        self.replicates = replicates
        self.params = BivariateDeathParams(y0[0], y0[1], delta, tau)
        self.h = h
        self.workers = workers

    def run(self) -> List[CheckResult]:
        params = self.params
        noise = params.noise
        y0 = (params.y1_0, params.y2_0)
        spec = bivariate_death_system(params)
        init = bivariate_death.initial_state(params)
        case = _case(y1=y0[0], y2=y0[1], delta=params.delta, tau=params.tau, h=self.h, n=self.replicates)

        self._first_event(spec, init, case)

        transitions = (bivariate_death.FIRST_DEATH, bivariate_death.SECOND_DEATH)
        simulated = simulate_increments(spec, init, self.h, transitions, self.replicates,
                                        RngStream(self.seed, 1), self.workers)
        subordinated = sample_subordinated_bivariate_death(y0, params.delta, noise, self.h,
                                                           self.replicates, RngStream(self.seed, 2))
        simulated_counts = Counter(map(tuple, simulated.tolist()))
        subordinated_counts = Counter(map(tuple, subordinated.tolist()))
        self.check_at_least('two_sample_chisquare', case,
                            chisquare_two_sample(simulated_counts, subordinated_counts), P_VALUE_FLOOR)

        exact = one_step_distribution_oracle(y0, params.delta, noise, self.h)
        laplace = one_step_distribution_laplace(y0, params.delta, noise, self.h)
        self.check_at_most('quadrature_vs_laplace', case,
                           max(abs(exact[cell] - laplace[cell]) for cell in exact), 1e-9)
        self.check_at_most('simulator_tv', case,
                           total_variation(empirical_distribution(simulated), exact), TV_TOLERANCE)
        self.check_at_most('subordinator_tv', case,
                           total_variation(empirical_distribution(subordinated), exact), TV_TOLERANCE)
        self.logger.info(f"Oracle: {sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return self.results

    def _first_event(self, spec, init: StateVector, case: str) -> None:
        family = spec.cojump_families[0]
        table = family.table(init)
        probabilities = {cell: rate / table.total for cell, rate in table.items()}
        simulator = GillespieSimulator(spec)
        generator = RngStream(self.seed, 0).generator()
        observed = Counter(simulator.next_event(init, generator)[1].sizes for _ in range(self.replicates))
        self.check_at_least('first_event_chisquare', case,
                            chisquare_goodness_of_fit(observed, probabilities), P_VALUE_FLOOR)


class MomentsSuite(BaseSuite):
    """Monte Carlo infinitesimal moments against their weighted-rate-sum targets."""

    name = 'moments'
    min_replicates = MIN_REPLICATES

    def __init__(
        self,
        seed: int,
        replicates: int = 100_000,
        intensity: float = 0.01,
        workers: Optional[int] = None
    ):
        super().__init__()
        if replicates < self.min_replicates:
            raise InsufficientReplicates(
                f"The moments suite needs at least {self.min_replicates} replicates, got {replicates}"
            )
        self.seed = seed
        self.replicates = replicates
        self.intensity = intensity
        self.workers = workers
        self._stream = 0

    def _next_stream(self) -> RngStream:
        self._stream += 1
        return RngStream(self.seed, self._stream)

    def run(self) -> List[CheckResult]:
        self._bivariate()
        self._sir()
        self.logger.info(f"Moments: {sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return self.results

    def _mean(self, spec, state: StateVector, transition, label: str) -> None:
        h = default_step(spec, state, self.intensity)
        estimate = estimate_infinitesimal_mean(spec, state, transition, h, self.replicates,
                                               self._next_stream(), self.workers)
        target = expected_infinitesimal_mean(spec, state, transition)
        self._record('mean', _case(model=label, transition=transition, h=f"{h:.6g}"),
                     estimate.value, target, SIGMAS, estimate.within(target, SIGMAS))

    def _covariance(self, spec, state: StateVector, pair, label: str, h: Optional[float] = None,
                    target: Optional[float] = None) -> None:
        h = h or default_step(spec, state, self.intensity)
        estimate = estimate_infinitesimal_covariance(spec, state, pair, h, self.replicates,
                                                     self._next_stream(), self.workers)
        if target is None:
            target = expected_infinitesimal_covariance(spec, state, pair)
        self._record('covariance', _case(model=label, pair=f"{pair[0]},{pair[1]}", h=f"{h:.6g}"),
                     estimate.value, target, SIGMAS, estimate.within(target, SIGMAS))

    def _bivariate(self) -> None:
        first, second = bivariate_death.FIRST_DEATH, bivariate_death.SECOND_DEATH
        params = DEFAULT_BIVARIATE
        spec = bivariate_death_system(params)
        self._covariance(spec, bivariate_death.initial_state(params), (first, second), 'bivariate(20,20)',
                         h=0.01, target=cojump_covariance_closed_form(20, 20, params.delta, params.noise))

        for y1, y2, delta, tau in ((1, 0, 1.0, 1.0), (2, 3, 1.0, 1.0), (20, 20, 0.5, 0.2)):
            params = BivariateDeathParams(y1, y2, delta, tau)
            spec = bivariate_death_system(params)
            self._mean(spec, bivariate_death.initial_state(params), first, f"bivariate({y1},{y2})")

    def _sir(self) -> None:
        params = DEFAULT_SIR
        spec = multistrain_sir_system(params)
        init = multistrain_sir.initial_state(params)
        mixed = spec.make_state({'S': 150, 'I1': 10, 'I2': 10, 'S1': 15, 'S2': 15})
        infection, reinfection = multistrain_sir.infection(1), multistrain_sir.reinfection(1)

        self._mean(spec, init, infection, 'sir(init)')
        self._covariance(spec, init, (infection, reinfection), 'sir(init)')
        self._covariance(spec, mixed, (infection, reinfection), 'sir(mixed)')
        self._covariance(spec, mixed, (multistrain_sir.recovery(1), multistrain_sir.recovery(2)), 'sir(mixed)')


class BoundsSuite(BaseSuite):
    """lambda(x) against its static bound over states visited by simulated paths."""

    name = 'bounds'

    def __init__(
        self,
        seed: int,
        cases: Optional[Iterable[Tuple[ModelParams, StateVector]]] = None,
        states_per_case: int = 1000,
        t_end: float = 50.0
    ):
        super().__init__()
        self.seed = seed
        self.cases = list(cases) if cases is not None else default_bound_cases()
        self.states_per_case = states_per_case
        self.t_end = t_end

    def run(self) -> List[CheckResult]:
        for index, (params, init) in enumerate(self.cases):
            self._case(index, params, init)
        self._all_recovered()
        self.logger.info(f"Bounds: {sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return self.results

    def _system(self, params: ModelParams):
        if isinstance(params, SirParams):
            return multistrain_sir_system(params)
        return bivariate_death_system(params)

    def _case(self, index: int, params: ModelParams, init: StateVector) -> None:
        spec = self._system(params)
        simulator = GillespieSimulator(spec)
        states: List[StateVector] = []
        path = 0
        while len(states) < self.states_per_case:
            trajectory = simulator.simulate(init, self.t_end, RngStream(self.seed, 1000 * (index + 1) + path))
            states.extend(trajectory.states)
            path += 1
            if trajectory.event_count == 0 and path > 10:
                break
        states = states[:self.states_per_case]

        worst_ratio = 0.0
        report = None
        case = _case(model=spec.name, states=len(states), paths=path)
        for state in states:
            try:
                report = check_p3_bound(spec, state, params)
            except BoundViolated:
                rate_bound, _ = static_bounds(params)
                self.check_at_most('rate_bound', _case(model=spec.name, state=state.as_dict()),
                                   rate_function(spec, state), rate_bound)
                continue
            if report.static_lambda_bound > 0:
                worst_ratio = max(worst_ratio, report.lambda_at_state / report.static_lambda_bound)
        self.check_at_most('rate_bound_ratio', case, worst_ratio, 1.0)
        if report is not None:
            self.check_at_least('p3_finite', case, float(math.isfinite(report.p3_moment_bound)), 1.0)

    def _all_recovered(self) -> None:
        params = DEFAULT_SIR
        spec = multistrain_sir_system(params)
        state = spec.make_state({'R': params.P})
        report = check_p3_bound(spec, state, params)
        self.check_relative('all_recovered_rate', _case(model=spec.name, R=params.P),
                            report.lambda_at_state, params.m * params.P, 1e-12)


def default_bound_cases() -> List[Tuple[ModelParams, StateVector]]:
    return [
        (DEFAULT_SIR, multistrain_sir.initial_state(DEFAULT_SIR)),
        (DEFAULT_BIVARIATE, bivariate_death.initial_state(DEFAULT_BIVARIATE)),
    ]


SUITES: Dict[str, Type[BaseSuite]] = {
    IdentitiesSuite.name: IdentitiesSuite,
    OracleSuite.name: OracleSuite,
    MomentsSuite.name: MomentsSuite,
    BoundsSuite.name: BoundsSuite,
}


def build_suite(
    name: str,
    seed: int,
    replicates: Optional[int] = None,
    cases: Optional[Iterable[Tuple[ModelParams, StateVector]]] = None,
    workers: Optional[int] = None
) -> BaseSuite:
    """
    Instantiate a suite by name.

    Raises:
        ConfigurationError: For an unknown suite
        InsufficientReplicates: If ``replicates`` is below the suite minimum
    """
    if name not in SUITES:
        raise ConfigurationError(f"Unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if name == IdentitiesSuite.name:
        return IdentitiesSuite()
    if name == BoundsSuite.name:
        return BoundsSuite(seed, cases=cases)
    kwargs = {'workers': workers}
    if replicates is not None:
        kwargs['replicates'] = replicates
    return SUITES[name](seed, **kwargs)
