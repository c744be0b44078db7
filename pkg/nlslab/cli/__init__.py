"""
Command line experiment runner

.. code:: bash

    nlslab run experiment.json --out results/
    nlslab sweep experiment.json --param train.family.v_sharp --values 4,8,16
    nlslab verify
    nlslab verify --literal

Exit codes are ``0`` on success, ``1`` if a verification or sweep row
failed, ``2`` for invalid configurations and ``3`` for runtime errors.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from ..__about__ import __version__
from ..exceptions import ConfigError, AcceptanceFailure
from .._concurrent.failures import Failures
from .config import ExperimentConfig
from .experiments import run
from .output import Output
from .sweep import sweep, parse_values, sweep_failures


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='nlslab',
        description='Soliton and kink-soliton train experiments',
    )
    parser.add_argument('--version', action='version', version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', help='output directory, overriding the config')
    common.add_argument(
        '--threads', type=int, default=None,
        help='thread budget, defaults to $NLSLAB_THREADS or 1',
    )
    common.add_argument('--seed', type=int, default=None, help='override the seed')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command', required=True)
    run_command = commands.add_parser('run', parents=[common], help='run an experiment')
    run_command.add_argument('config')
    sweep_command = commands.add_parser(
        'sweep', parents=[common], help='run an experiment for several values',
    )
    sweep_command.add_argument('config')
    sweep_command.add_argument('--param', required=True, help='dotted config path')
    sweep_command.add_argument('--values', required=True, help='comma separated values')
    verify_command = commands.add_parser(
        'verify', parents=[common], help='run the acceptance suite',
    )
    verify_command.add_argument('config', nargs='?', default=None)
    verify_command.add_argument(
        '--literal', action='store_true',
        help='run the bundled suite at the literal acceptance parameters',
    )
    return parser


def _configure_logging(options):
    level = logging.DEBUG if options.verbose else (
        logging.WARNING if options.quiet else logging.INFO
    )
    logging.basicConfig(
        level=level, format='%(asctime)s %(levelname)-7s %(name)s: %(message)s',
    )


def _load(options) -> ExperimentConfig:
    if options.command == 'verify' and options.literal:
        if options.config is not None:
            raise ConfigError('', '--literal runs the bundled suite, drop %s' % (
                options.config
            ))
        config = ExperimentConfig.literal()
    elif options.command == 'verify' and options.config is None:
        config = ExperimentConfig.default()
    else:
        config = ExperimentConfig.load(options.config)
    if options.command == 'verify' and config.experiment != 'verify':
        raise ConfigError('experiment', 'verify requires a verify configuration')
    if options.seed is not None:
        raw = dict(config.raw, seed=options.seed)
        config = ExperimentConfig(raw, config.source)
    return config


def _execute(options, config: ExperimentConfig, output: Output) -> int:
    if options.command == 'sweep':
        rows = sweep(
            config, options.param, parse_values(options.values), output,
            threads=options.threads,
        )
        failures = sweep_failures(rows)
        output.manifest(config.raw, 'failed' if failures else 'ok', {
            'parameter': options.param, 'rows': [
                {'value': row.value, 'summary': row.summary,
                 'error': None if row.error is None else str(row.error)}
                for row in rows
            ],
        })
        if failures:
            logger.error('%s', failures)
            return EXIT_FAILED
        return EXIT_OK
    try:
        summary = run(config, output, threads=options.threads)
    except Failures as err:
        flat = err.flattened()
        output.manifest(config.raw, 'failed', {'failures': [
            str(child) for child in flat.children
        ]})
        for child in flat.children:
            logger.error('%s', child)
        if all(isinstance(child, AcceptanceFailure) for child in flat.children) \
                or config.experiment == 'verify':
            return EXIT_FAILED
        return EXIT_RUNTIME
    output.manifest(config.raw, 'ok', summary)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface on ``argv`` and provide the exit code"""
    options = _parser().parse_args(argv)
    _configure_logging(options)
    config = output = None
    try:
        config = _load(options)
        output = Output(config.output_directory(options.out))
        return _execute(options, config, output)
    except ConfigError as err:
        logger.error('invalid configuration: %s', err)
        code, message = EXIT_CONFIG, str(err)
    except Exception as err:
        logger.error(
            'experiment failed: %s', err, exc_info=logger.isEnabledFor(logging.DEBUG)
        )
        code, message = EXIT_RUNTIME, str(err)
    if output is not None:
        output.manifest(config.raw, 'error', {'error': message})
    return code


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
