#!/usr/bin/env python3
"""
ESSI - Equal Spin-Spin Interaction spectra
Command Line Interface

Closed-form and numerical spectra of n spin-1/2 particles with uniform
pairwise couplings, verification of the closed forms and stick spectra.
"""

import sys
import argparse
from typing import List, Optional

try:
    from rich.console import Console
    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False

import numpy as np

from essi import __version__, get_logger
from essi.core.basis import EssiParams, PairConvention, Sector
from essi.core.closed_form import full_closed_spectrum, sector_closed_spectrum
from essi.core.couplings import (
    AveragingNormalization,
    PairCouplings,
    average_couplings,
    essi_parameters_from_pairs,
)
from essi.core.engine import diagonal_energy_first_principles, flipflop_block, sector_spectrum
from essi.core.report_generator import ReportGenerator
from essi.core.transitions import DiagonalTrack, Population, merge_lines, stick_spectrum
from essi.core.verifier import (
    check_five_spin_fixtures,
    cluster_eigenvalues,
    default_cluster_tau,
    verify_up_to,
)
from essi.utils.config import DEFAULT_CONFIG_FILE, config
from essi.utils.errors import (
    CombinatoricsError,
    CouplingError,
    EssiError,
    ParameterError,
    SectorTooLargeError,
)
from essi.utils.logger import setup_logging

# Banner and status messages go to stderr; stdout carries report data
if RICH_AVAILABLE:
    console = Console(stderr=True)
else:
    console = None

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

USAGE_ERRORS = (ParameterError, CombinatoricsError, CouplingError, SectorTooLargeError)


def print_banner():
    """Print application banner"""
    banner = f"""
    ╔═══════════════════════════════════════════════════════════════╗
    ║                                                               ║
    ║    Equal Spin-Spin Interaction spectra (ESSI) v{__version__:<15}║
    ║                                                               ║
    ║    * Closed-form sector spectra                               ║
    ║    * Numerical verification                                   ║
    ║    * Stick spectra                                            ║
    ║                                                               ║
    ╚═══════════════════════════════════════════════════════════════╝
    """

    if RICH_AVAILABLE:
        console.print(banner, style="bold blue")
    else:
        print(banner, file=sys.stderr)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-f', '--format', choices=['json', 'csv', 'table', 'html'],
                        help='Output format (default: reporting.default_format)')
    common.add_argument('-o', '--output', help='Output file (default: stdout)')
    common.add_argument('--unit', choices=['rad/s', 'hz'], default='rad/s',
                        help='Energy unit; hz divides by 2*pi (default: rad/s)')
    common.add_argument('--convention', choices=[c.value for c in PairConvention],
                        default=PairConvention.UNORDERED.value,
                        help='Pair-sum convention (default: unordered-distinct)')
    common.add_argument('--config', help='Configuration file (YAML or JSON)')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='Enable verbose logging')
    common.add_argument('-q', '--quiet', action='store_true',
                        help='Warnings only, no banner')
    common.add_argument('--timing', action='store_true',
                        help='Include wall time in reports')
    return common


def _add_params(parser: argparse.ArgumentParser, require_b: bool = False,
                default_b: float = 0.0) -> None:
    parser.add_argument('--omega0', type=float, default=0.0,
                        help='Zeeman frequency in rad/s (default: 0)')
    parser.add_argument('--A', dest='coupling_A', type=float, default=0.0,
                        help='Longitudinal coupling A in rad/s (default: 0)')
    if require_b:
        parser.add_argument('--B', dest='coupling_B', type=float, required=True,
                            help='Flip-flop coupling B in rad/s')
    else:
        parser.add_argument('--B', dest='coupling_B', type=float, default=default_b,
                            help=f'Flip-flop coupling B in rad/s (default: {default_b:g})')


def create_parser():
    """Create command line argument parser"""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='essi',
        description="Equal Spin-Spin Interaction spectra (ESSI)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Sector sizes
  essi sectors 5

  # Closed-form levels of one sector
  essi closed-form 5 --p 2

  # Numerical sector spectrum with eigenvectors
  essi diagonalize 6 3 --B 0.5 --vectors -f json

  # Verify the closed forms for every sector up to n = 8
  essi verify --max-n 8 -f json -o report.json

  # Check the printed five-spin reference rows
  essi table1

  # Stick spectrum at 300 K in Hz
  essi spectrum 4 --omega0 100 --A 0.3 --B 0.2 --temperature 300 --unit hz
        """
    )

    parser.add_argument('--version', action='version', version=f'ESSI {__version__}')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    sectors_parser = subparsers.add_parser('sectors', parents=[common],
                                           help='Sector sizes C(n, p)')
    sectors_parser.add_argument('n', type=int, help='Number of spins')

    closed_parser = subparsers.add_parser('closed-form', parents=[common],
                                          help='Closed-form sector spectra')
    closed_parser.add_argument('n', type=int, help='Number of spins')
    closed_parser.add_argument('--p', type=int, help='Only this sector')
    _add_params(closed_parser, default_b=1.0)

    diag_parser = subparsers.add_parser('diagonalize', parents=[common],
                                        help='Numerical spectrum of one sector')
    diag_parser.add_argument('n', type=int, help='Number of spins')
    diag_parser.add_argument('p', type=int, help='Number of up spins')
    _add_params(diag_parser, require_b=True)
    diag_parser.add_argument('--vectors', action='store_true',
                             help='Include eigenvectors (JSON only)')
    diag_parser.add_argument('--matrix-csv', help='Export the dense sector block as CSV')

    verify_parser = subparsers.add_parser('verify', parents=[common],
                                          help='Verify the closed forms numerically')
    verify_parser.add_argument('--max-n', type=int, required=True,
                               help='Largest spin count to verify')
    verify_parser.add_argument('--tol', type=float,
                               help='Relative eigenvalue tolerance (default: verifier.tol)')
    verify_parser.add_argument('--workers', type=int,
                               help='Worker threads (default: concurrency.max_workers)')
    verify_parser.add_argument('--title', default='ESSI Verification Report',
                               help='HTML report title')

    subparsers.add_parser('table1', aliases=['five-spin'], parents=[common],
                          help='Check the printed five-spin reference rows')

    spectrum_parser = subparsers.add_parser('spectrum', parents=[common],
                                            help='Single-quantum stick spectrum')
    spectrum_parser.add_argument('n', type=int, help='Number of spins')
    _add_params(spectrum_parser, require_b=True)
    spectrum_parser.add_argument('--temperature', type=float,
                                 help='Boltzmann population at this temperature in K '
                                      '(default: uniform)')
    spectrum_parser.add_argument('--diagonal-track', choices=[t.value for t in DiagonalTrack],
                                 default=DiagonalTrack.FIRST_PRINCIPLES.value,
                                 help='Diagonal energies used for the levels')
    spectrum_parser.add_argument('--no-merge', action='store_true',
                                 help='Keep coincident lines separate')
    spectrum_parser.add_argument('--tau-line', type=float,
                                 help='Merge distance in rad/s (default: relative to span)')

    averages_parser = subparsers.add_parser('averages', parents=[common],
                                            help='Average pair couplings from a CSV file')
    averages_parser.add_argument('csv', help='CSV with columns f, j, A_fj, B_fj')
    averages_parser.add_argument('--n', type=int, help='Number of spins (default: largest index)')
    averages_parser.add_argument('--normalization',
                                 choices=[m.value for m in AveragingNormalization],
                                 default=AveragingNormalization.SPIN_COUNT.value,
                                 help='Divisor of the pair sums')
    averages_parser.add_argument('--omega0', type=float, default=0.0,
                                 help='Zeeman frequency for the derived parameters')
    averages_parser.add_argument('--spread-sign', type=int, choices=[-1, 0, 1], default=0,
                                 help='Add this multiple of the spread to the means')

    init_parser = subparsers.add_parser('init-config', parents=[common],
                                        help='Write a sample configuration file')
    init_parser.add_argument('path', nargs='?', default=DEFAULT_CONFIG_FILE,
                             help=f'Target file (default: {DEFAULT_CONFIG_FILE})')

    return parser


def _params(args, n: int) -> EssiParams:
    return EssiParams(n=n, omega0=args.omega0, coupling_A=args.coupling_A,
                      coupling_B=args.coupling_B, pair_convention=args.convention)


def _check_format(args, html_allowed: bool = False) -> None:
    if args.format == 'html' and not html_allowed:
        raise ParameterError("HTML output is available for verify only",
                             {"command": args.command})


def cmd_sectors(args, generator: ReportGenerator) -> int:
    """Execute sectors command"""
    _check_format(args)
    # Validates n against basis.max_n
    EssiParams(n=args.n)
    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream, generator.sectors_table(args.n),
                       generator.sectors_payload(args.n), 'sectors')
    return EXIT_OK


def cmd_closed_form(args, generator: ReportGenerator) -> int:
    """Execute closed-form command"""
    _check_format(args)
    params = _params(args, args.n)
    if args.p is not None:
        spectra = [sector_closed_spectrum(params, Sector(args.n, args.p))]
    else:
        spectra = full_closed_spectrum(params)
    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream,
                       generator.closed_form_table(params, spectra, args.unit),
                       generator.closed_form_payload(params, spectra, args.unit), 'closed_form')
    return EXIT_OK


def cmd_diagonalize(args, generator: ReportGenerator) -> int:
    """Execute diagonalize command"""
    _check_format(args)
    params = _params(args, args.n)
    sector = Sector(args.n, args.p)
    result = sector_spectrum(params, sector, want_vectors=args.vectors)
    diagonal = diagonal_energy_first_principles(sector, params)
    clusters = cluster_eigenvalues(result.eigenvalues, default_cluster_tau(result.eigenvalues))

    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream,
                       generator.eigen_table(sector, result, diagonal, args.unit),
                       generator.eigen_payload(params, sector, result, diagonal, clusters,
                                               args.unit),
                       'sector_eigen')

    if args.matrix_csv:
        block = flipflop_block(sector, params).dense() + diagonal * np.eye(sector.dimension)
        with generator.atomic_output(args.matrix_csv, sys.stdout) as stream:
            generator.write_matrix_csv(block, stream)
    return EXIT_OK


def cmd_verify(args, generator: ReportGenerator) -> int:
    """Execute verify command"""
    _check_format(args, html_allowed=True)
    report = verify_up_to(args.max_n, tol=args.tol, convention=args.convention,
                          max_workers=args.workers)
    include_timing = args.timing or bool(config.get('reporting.include_timing', False))

    with generator.atomic_output(args.output, sys.stdout) as stream:
        if args.format == 'html':
            stream.write(generator.render_html(report, title=args.title,
                                               include_timing=include_timing))
        elif args.format == 'table':
            generator.render_table(generator.verification_table(report), stream)
            generator.render_table(generator.fixtures_table(report.fixture_verdicts), stream)
            for item in report.known_discrepancies:
                stream.write(f"known discrepancy: {item.identifier}\n")
        else:
            generator.emit(args.format, stream, generator.verification_table(report),
                           generator.verification_payload(report, include_timing),
                           'verification_report')

    if not report.verdict:
        failed = ", ".join(str(s.sector) for s in report.failed_sectors)
        logger.error(f"Closed-form verification failed for: {failed}")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_five_spin(args, generator: ReportGenerator) -> int:
    """Execute five-spin command"""
    _check_format(args)
    verdicts = check_five_spin_fixtures()
    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream, generator.fixtures_table(verdicts),
                       generator.fixtures_payload(verdicts), 'five_spin')
    return EXIT_OK


def cmd_spectrum(args, generator: ReportGenerator) -> int:
    """Execute spectrum command"""
    _check_format(args)
    params = _params(args, args.n)
    if args.temperature is None:
        population = Population.uniform()
    else:
        population = Population.boltzmann(args.temperature)

    lines = stick_spectrum(params, population, diagonal_track=args.diagonal_track)
    if not args.no_merge:
        lines = merge_lines(lines, args.tau_line)

    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream,
                       generator.spectrum_table(params, lines, args.unit),
                       generator.spectrum_payload(params, population, args.diagonal_track,
                                                  lines, not args.no_merge, args.unit),
                       'spectrum')
    return EXIT_OK


def cmd_averages(args, generator: ReportGenerator) -> int:
    """Execute averages command"""
    _check_format(args)
    pairs = PairCouplings.from_csv(args.csv, n=args.n)
    averages = average_couplings(pairs, args.convention, args.normalization)
    params = essi_parameters_from_pairs(pairs, omega0=args.omega0,
                                        spread_sign=args.spread_sign,
                                        convention=args.convention,
                                        normalization=args.normalization)
    with generator.atomic_output(args.output, sys.stdout) as stream:
        generator.emit(args.format, stream, generator.averages_table(averages),
                       generator.averages_payload(averages, params), 'averages')
    return EXIT_OK

def cmd_init_config(args, generator: ReportGenerator) -> int:
    """Execute init-config command"""
    _check_format(args)
    config.create_sample_config(args.path)
    return EXIT_OK


COMMANDS = {
    'sectors': cmd_sectors,
    'closed-form': cmd_closed_form,
    'diagonalize': cmd_diagonalize,
    'verify': cmd_verify,
    'table1': cmd_five_spin,
    'five-spin': cmd_five_spin,
    'spectrum': cmd_spectrum,
    'averages': cmd_averages,
    'init-config': cmd_init_config,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, execute one command and return the exit code"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    if args.config:
        config.reload(args.config)
    if args.format is None:
        args.format = config.get('reporting.default_format', 'table')

    # Setup logging
    level = 'WARNING' if args.quiet else config.get('logging.level', 'INFO')
    setup_logging(verbose=args.verbose, level=level,
                  log_dir=config.get('logging.log_directory'))

    if not args.quiet:
        print_banner()

    try:
        return COMMANDS[args.command](args, ReportGenerator())
    except USAGE_ERRORS as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
    except EssiError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logger.error("Interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        return EXIT_FAILURE


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == '__main__':
    main()
