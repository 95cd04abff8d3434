"""
Main script for the co-jump Markov counting system simulator
"""

import argparse
import logging
import sys
from dataclasses import fields
from typing import Optional, Tuple

from src.config import get_settings
from src.core.base_suite import CheckResult
from src.core.exceptions import CoJumpError, ConfigurationError
from src.core.system import TransitionType
from src.estimators.moments import (
    default_step,
    estimate_infinitesimal_covariance,
    expected_infinitesimal_covariance,
    state_hash,
)
from src.exporters.csv_exporter import CSVExporter
from src.exporters.json_exporter import JSONExporter
from src.parsers.config_parser import RunConfig, RunConfigParser
from src.simulators.gillespie import GillespieSimulator
from src.simulators.rng import RngStream
from src.utils.logger import setup_logger
from src.verification import SUITES, build_suite

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3

SCHEMA_VERSION = 1
REPORT_FIELDS = [f.name for f in fields(CheckResult)]
ESTIMATE_FIELDS = ['model', 'state_hash', 'pair', 'h', 'replicates', 'estimate', 'std_error',
                   'closed_form', 'z_score']

logger = logging.getLogger('cojump')


def cmd_simulate(config: RunConfig) -> int:
    """
    Simulate every replicate and export trajectories plus a summary.

    Args:
        config: Validated run configuration

    Returns:
        Exit status
    """
    settings = get_settings()
    spec = config.build_system()
    simulator = GillespieSimulator(spec, event_budget=settings.event_budget)
    stream = RngStream(config.seed, 0)
    csv_exporter = CSVExporter(output_dir=config.output_dir)

    logger.info(f"Simulating {config.replicates} replicate(s) of {config.model} to t={config.t_end}")

    replicates = []
    for index in range(config.replicates):
        trajectory = simulator.simulate(config.init, config.t_end, stream.replicate(index))
        csv_exporter.export(trajectory.rows(), f"{config.model}_trajectory_{index:04d}.csv",
                            fieldnames=trajectory.fieldnames())
        summary = trajectory.summary()
        if not summary['mass_conserved']:
            logger.error(f"Replicate {index} violates mass conservation")
        replicates.append({'replicate': index, **summary})

    summary = {
        'schema_version': SCHEMA_VERSION,
        'model': config.model,
        'seed': config.seed,
        't_end': config.t_end,
        'initial_state': config.init.as_dict(),
        'replicates': replicates,
    }
    file_path = JSONExporter(output_dir=config.output_dir).export(summary, f"{config.model}_summary.json")
    logger.info(f"Summary written to: {file_path}")
    if not all(item['mass_conserved'] for item in replicates):
        return EXIT_RUNTIME_ERROR
    return EXIT_OK


def cmd_verify(config: RunConfig, suite: str, replicates: Optional[int] = None) -> int:
    """
    Run one verification suite and export its report.

    Args:
        config: Run configuration (seed, output directory and, for bounds, the model)
        suite: Suite name
        replicates: Monte Carlo replicates (suite default when None)

    Returns:
        0 if every check passed, 1 otherwise
    """
    settings = get_settings()
    runner = build_suite(suite, config.seed, replicates=replicates,
                         cases=[(config.params, config.init)], workers=settings.workers)
    logger.info(f"Running {suite} suite with seed {config.seed}")
    results = runner.run()

    file_path = CSVExporter(output_dir=config.output_dir).export(
        [result.as_row() for result in results], f"verify_{suite}.csv", fieldnames=REPORT_FIELDS
    )
    logger.info(f"Report written to: {file_path}")

    failed = [result for result in results if not result.passed]
    for result in failed:
        logger.error(
            f"Check failed: {result.check} [{result.case}] observed={result.observed!r} "
            f"expected={result.expected!r} tolerance={result.tolerance!r}"
        )
    logger.info(f"{suite}: {len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFICATION_FAILED if failed else EXIT_OK


def parse_pair(text: str) -> Tuple[TransitionType, TransitionType]:
    """Parse ``'A->B,C->D'`` into two transition types."""
    parts = [part for part in text.split(',') if part.strip()]
    if len(parts) != 2:
        raise ConfigurationError(f"--pair needs two transitions separated by a comma, got {text!r}")
    return TransitionType.parse(parts[0]), TransitionType.parse(parts[1])


def cmd_estimate(
    config: RunConfig,
    pair: Tuple[TransitionType, TransitionType],
    h: Optional[float] = None
) -> int:
    """
    Estimate one infinitesimal covariance at the initial state and report it
    against the weighted rate sum.

    The estimate is informational, so the status is 0 whatever the z-score.
    """
    settings = get_settings()
    spec = config.build_system()
    for transition in pair:
        if transition not in spec.transitions:
            raise ConfigurationError(f"{spec.name} has no transition {transition}")
    if h is None:
        h = default_step(spec, config.init)
    elif h <= 0:
        raise ConfigurationError(f"--h must be positive, got {h}")

    estimate = estimate_infinitesimal_covariance(spec, config.init, pair, h, config.replicates,
                                                 RngStream(config.seed, 0), workers=settings.workers)
    closed_form = expected_infinitesimal_covariance(spec, config.init, pair)
    z_score = estimate.z_score(closed_form)
    label = f"{pair[0]},{pair[1]}"

    row = {
        'model': config.model,
        'state_hash': state_hash(config.init),
        'pair': label,
        'h': h,
        'replicates': estimate.replicates,
        'estimate': estimate.value,
        'std_error': estimate.std_error,
        'closed_form': closed_form,
        'z_score': z_score,
    }
    file_path = CSVExporter(output_dir=config.output_dir).export(
        [row], f"estimate_{config.model}.csv", fieldnames=ESTIMATE_FIELDS
    )
    print(f"{label}: estimate {estimate.value:.6g} +/- {estimate.std_error:.3g}, "
          f"closed form {closed_form:.6g}, z = {z_score:.3f}")
    logger.info(f"Estimate written to: {file_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Exact simulation and verification of Markov counting systems with co-jumps'
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True, help='YAML model configuration')
    common.add_argument('--seed', type=int, help='Override model.seed')
    common.add_argument('--replicates', type=int, help='Override model.replicates')
    common.add_argument('--out', help='Output directory (default: OUTPUT_DIR)')
    common.add_argument('--t-end', dest='t_end', type=float, help='Override model.t_end')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    subparsers.add_parser('simulate', parents=[common], help='Simulate trajectories')

    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run a verification suite')
    verify_parser.add_argument('--suite', required=True, choices=sorted(SUITES), help='Suite to run')

    estimate_parser = subparsers.add_parser('estimate', parents=[common],
                                            help='Estimate an infinitesimal covariance')
    estimate_parser.add_argument('--pair', required=True, help="Transition pair, e.g. 'S->I1,S1->I1*'")
    estimate_parser.add_argument('--h', type=float, help='Step length (default: STEP_TARGET / lambda(x))')

    return parser


def main(argv=None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_CONFIG_ERROR

    try:
        settings = get_settings()
        setup_logger(name='', level=settings.log_level, workers=settings.workers)
        config = RunConfigParser(output_dir=settings.output_dir).load(
            args.config,
            seed=args.seed,
            t_end=args.t_end,
            output_dir=args.out,
            # verify keeps the suite default unless --replicates is given
            replicates=args.replicates if args.command != 'verify' else None,
        )

        if args.command == 'simulate':
            return cmd_simulate(config)
        if args.command == 'verify':
            return cmd_verify(config, args.suite, replicates=args.replicates)
        return cmd_estimate(config, parse_pair(args.pair), args.h)

    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except (CoJumpError, OSError) as e:
        logger.error(f"Runtime error: {type(e).__name__}: {e}")
        return EXIT_RUNTIME_ERROR


if __name__ == '__main__':
    sys.exit(main())
