"""
Main entry point for the THz hybrid beamforming simulator.

One subcommand per sweep; each writes a CSV with a metadata header.
Exit codes: 0 all points completed, 1 some points flagged, 2 bad configuration.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

# Add the project root directory to the Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config.config_manager import ConfigManager
from src.config.settings import scenario_from_manager
from src.experiments.runner import EXPERIMENTS
from src.utils.exceptions import ConfigValidationError
from src.utils.logging import configure_logging

EXIT_OK = 0
EXIT_FLAGGED = 1
EXIT_CONFIG_ERROR = 2

logger = logging.getLogger('src.main')


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(description='THz ultra-massive MIMO hybrid beamforming simulator')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config',
                        help='Path to the scenario file (default: config.json in $THZ_HBF_CONFIG_DIR or the project root)')
    common.add_argument('-o', '--out',
                        help='Output CSV path (default: <paths.results>/<command>.csv)')
    common.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help='Override a configuration value, e.g. --set channel.distance=50 (repeatable)')
    common.add_argument('--seed', type=int,
                        help='Seed recorded in the output (overrides algorithm.seed)')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='Only show warnings and errors on the console')
    verbosity.add_argument('-v', '--verbose', action='store_true',
                           help='Enable verbose logging')

    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    helps = {
        'rate-vs-power': 'Rate of FC, AoSA and WSMS over transmit power',
        'daosa-tradeoff': 'DAoSA rate and power for every closed-switch count',
        'array-gain': 'Per-subcarrier gain of phase-shifter and TTD beams',
        'rayleigh': 'Rayleigh distance of an aperture at several frequencies',
        'power-budget': 'Device census and power of each architecture',
        'ttd-resolution': 'TTD residual squint versus delay resolution',
        'squint-vs-bandwidth': 'Beam-squint loss versus fractional bandwidth',
        'wsms-subarrays': 'WSMS rank and rate versus subarray count',
    }
    for command in EXPERIMENTS:
        subparsers.add_parser(command, parents=[common], help=helps[command])

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one sweep and return the process exit code."""
    args = parse_arguments(argv)

    try:
        config_manager = ConfigManager(args.config)
        config_manager.apply_overrides(args.overrides)
        if args.seed is not None:
            config_manager.update_config('algorithm.seed', args.seed)
        scenario = scenario_from_manager(config_manager)
    except ConfigValidationError as e:
        logging.basicConfig(format='%(levelname)s - %(message)s')
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    configure_logging(config_manager.get_log_config(), quiet=args.quiet, verbose=args.verbose)
    logger.info(f"Running {args.command} (config hash {scenario.config_hash[:12]})")

    result = EXPERIMENTS[args.command](scenario)

    out = args.out or os.path.join(config_manager.get('paths.results', 'results/'), f"{args.command}.csv")
    result.to_csv(out)

    if result.flagged_count:
        logger.warning(f"{result.flagged_count} of {len(result)} point(s) flagged, see {out}")
        return EXIT_FLAGGED
    logger.info(f"{len(result)} point(s) completed, results in {out}")
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
