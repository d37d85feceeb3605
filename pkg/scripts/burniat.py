#!/usr/bin/env python3
"""
Command-line front end: invariants, lct, glct-upper, eigensystem and check.

Reports go to stdout (text or JSON); logs go to stderr and the rotating log file.
Exit codes: 0 every item passed, 1 something failed, 2 usage error.
"""

import sys
import os
import argparse
import logging

# Add project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.cli import commands
from src.config.settings import settings
from src.utils.error_handler import BurniatError, error_entry
from src.utils.logger import setup_logging

logger = logging.getLogger('burniat')

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='burniat',
        description='Exact intersection calculus and lct certificate checking for the secondary Burniat surface',
    )
    parser.add_argument('--quiet', action='store_true', help='Only log warnings to the console')
    sub = parser.add_subparsers(dest='command', required=True)

    def with_common(p):
        p.add_argument('--format', choices=['text', 'json'], default=settings.REPORT_FORMAT,
                       help='Report format (default from REPORT_FORMAT)')
        # Also accepted after the command; SUPPRESS keeps the top-level value otherwise
        p.add_argument('--quiet', action='store_true', default=argparse.SUPPRESS,
                       help='Only log warnings to the console')
        return p

    with_common(sub.add_parser('invariants', help='K^2, p_g, chi, q, the K_X table and the building data'))

    lct = with_common(sub.add_parser('lct', help='lct of a divisor expression or a named witness'))
    lct.add_argument('expr', help="e.g. '4*H13 + 2*E3 + 2*E1 + 2*H24' or '@D1-odd'")
    lct.add_argument('--n', type=int, help='Parameter for a named witness')

    glct = with_common(sub.add_parser('glct-upper', help='Upper bound for glct(X, 2K_X) by enumeration'))
    glct.add_argument('--max-coeff', type=int, default=settings.GLCT_MAX_COEFF,
                      help='Coefficient cap per curve (default from GLCT_MAX_COEFF)')

    eigen = with_common(sub.add_parser('eigensystem', help='Eigen-subsystems of |mK_X|'))
    eigen.add_argument('m', type=int)

    check = with_common(sub.add_parser('check', help='Check certificates'))
    check.add_argument('paths', nargs='*', metavar='PATH')
    check.add_argument('--all', action='store_true', help='Check the whole corpus (CORPUS_DIR)')
    check.add_argument('--mutate', action='store_true', help='Run the mutation harness instead')
    check.add_argument('--n', type=int, help='Check at a concrete parameter value')
    check.add_argument('--workers', type=int, default=settings.CHECK_WORKERS)
    return parser


def run(args: argparse.Namespace):
    if args.command == 'invariants':
        return commands.cmd_invariants()
    if args.command == 'lct':
        return commands.cmd_lct(args.expr, args.n)
    if args.command == 'glct-upper':
        return commands.cmd_glct_upper(args.max_coeff)
    if args.command == 'eigensystem':
        return commands.cmd_eigensystem(args.m)
    return commands.cmd_check(args.paths, args.all, args.mutate, args.n, args.workers)


def main(argv=None) -> int:
    """Parse arguments, run one command and print its report"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0

    if args.command == 'check' and not args.paths and not args.all:
        parser.print_usage(sys.stderr)
        logger.error("check needs PATH arguments or --all")
        return EXIT_USAGE

    setup_logging(quiet=args.quiet or args.format == 'json')

    try:
        settings.validate()
        report = run(args)
    except (BurniatError, ValueError) as e:
        entry = error_entry(e)
        logger.error(f"✗ {entry['error']}")
        return 1

    print(report.render(args.format))
    if report.passed:
        logger.info(f"✓ {report.command}: all {len(report.items)} items passed")
    else:
        logger.warning(f"⚠ {report.command}: failures reported")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
