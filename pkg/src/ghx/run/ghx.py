"""
The `ghx` command: scans, verdicts, bound comparisons, counterexamples and Fourier checks of
systems of operators on compact Lie groups.
"""

import argparse
import sys
from typing import NoReturn, Optional

from ghx import __version__
from ghx.env import Environ
from ghx.ops.bounds import compare_bounds
from ghx.ops.counterexample import synthesize
from ghx.ops.fourier_check import fourier_check
from ghx.ops.groups import list_reps
from ghx.ops.scan import scan_system
from ghx.ops.selftest import run_selftest
from ghx.ops.verdict import decide
from ghx.print import print_error, set_verbosity
from ghx.settings import Consts, Settings
from ghx.util import GhxError


class GhxArgumentParser(argparse.ArgumentParser):
    """`ArgumentParser` exiting with 1 on usage errors since 2 is the code of GH_VIOLATED"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(Consts.exit_usage(), f"{self.prog}: error: {message}\n")


def main() -> None:
    sys.exit(main_argv(sys.argv[1:]))


def main_argv(argv: list[str]) -> int:
    """
    Parse the arguments, load the settings and run the selected operation.

    :param argv: the command-line arguments without the program name
    :return: the exit code of the operation, or 1 for usage and configuration errors
    """
    args = parse_args(argv)
    set_verbosity(args.quiet, args.verbose)
    try:
        settings = Settings.load(Environ(), args.settings)
        return args.func(args, settings)
    except (GhxError, ValueError, OSError) as ex:
        print_error(f"ghx {args.operation}: {ex}")
        return Consts.exit_usage()


def parse_args(argv: Optional[list[str]]) -> argparse.Namespace:
    parser = GhxArgumentParser(prog="ghx", description="Global hypoellipticity diagnostics for "
                                                       "systems of operators on compact Lie groups")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    operations = parser.add_subparsers(title="Operations", required=True, metavar="OPERATION",
                                       dest="operation", help="DESCRIPTION")
    add_scan(add_subparser(operations, "scan", "evaluate a system over the truncated dual and "
                                               "write the records"))
    add_verdict(add_subparser(operations, "verdict", "decide global hypoellipticity from "
                                                     "records or a system configuration"))
    add_bounds(add_subparser(operations, "bounds", "compare the lower bounds of the smallest "
                                                   "singular value with the exact value"))
    add_counterexample(add_subparser(operations, "counterexample",
                                     "synthesize the witness of a failed growth condition"))
    add_fourier_check(add_subparser(operations, "fourier-check",
                                    "check the torus Fourier transforms and quantization"))
    add_selftest(add_subparser(operations, "selftest", "run the acceptance suites"))
    add_groups(add_subparser(operations, "groups", "list the representations of a group"))
    return parser.parse_args(argv)


# noinspection PyProtectedMember
def add_subparser(operations: argparse._SubParsersAction, name: str,
                  hlp: str) -> argparse.ArgumentParser:
    subparser = operations.add_parser(name, help=hlp)
    add_common_args(subparser)
    return subparser


def add_common_args(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("-S", "--settings", type=str,
                           help="path of the settings file to use instead of `ghx.ini` from the "
                                "user or bundled configuration directories")
    subparser.add_argument("-q", "--quiet", action="count", default=0,
                           help="suppress informational messages; specifying it twice will "
                                "suppress warnings too")
    subparser.add_argument("-v", "--verbose", action="count", default=0,
                           help="show progress of the scans and suites")


def add_threads(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("-j", "--threads", type=int,
                           help="worker threads of the scans where 0 is one per CPU; "
                                "$GHX_THREADS overrides this and [scan] threads in the settings")


def add_config(subparser: argparse.ArgumentParser, required: bool = True) -> None:
    subparser.add_argument("-c", "--config", type=str, required=required,
                           help="system configuration: a JSON file or a bundled system name "
                                "like 'grad2'")


def add_scan(subparser: argparse.ArgumentParser) -> None:
    add_config(subparser)
    subparser.add_argument("-l", "--cutoff", type=float, required=True,
                           help="scan every representation with <xi> <= CUTOFF")
    subparser.add_argument("-t", "--tail", type=float,
                           help="fraction of the enumeration forming the tail window recorded in "
                                "the output (default from the settings, 0.5)")
    subparser.add_argument("-o", "--out", type=str, default="-",
                           help="JSON records file to write, '-' for standard output (default)")
    subparser.add_argument("--csv", type=str, help="also write the records as plot-ready CSV")
    add_threads(subparser)
    subparser.set_defaults(func=scan_system)


def add_verdict(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("-r", "--records", type=str,
                           help="records file written by 'ghx scan'")
    add_config(subparser, required=False)
    subparser.add_argument("-l", "--cutoff", type=float,
                           help="cutoff of the scan when using -c/--config")
    subparser.add_argument("-t", "--tail", type=float,
                           help="fraction of the enumeration forming the tail window (default "
                                "is the one of the records, else from the settings)")
    subparser.add_argument("-o", "--out", type=str,
                           help="write the verdict report as JSON, '-' for standard output")
    add_threads(subparser)
    subparser.set_defaults(func=decide)


def add_bounds(subparser: argparse.ArgumentParser) -> None:
    add_config(subparser)
    subparser.add_argument("-l", "--cutoff", type=float, required=True,
                           help="compare at every representation with <xi> <= CUTOFF")
    subparser.add_argument("-o", "--out", type=str, help="also write the JSON records")
    subparser.add_argument("--csv", type=str, help="also write the records as plot-ready CSV")
    subparser.add_argument("-n", "--no-table", dest="quiet_table", action="store_true",
                           help="skip the table on standard output")
    add_threads(subparser)
    subparser.set_defaults(func=compare_bounds)


def add_counterexample(subparser: argparse.ArgumentParser) -> None:
    add_config(subparser)
    subparser.add_argument("-m", "--max-cutoff", type=float, required=True,
                           help="search violations among the representations with "
                                "<xi> <= MAX_CUTOFF")
    subparser.add_argument("-n", "--max-length", type=int,
                           help="longest violating sequence (default from the settings, 64)")
    subparser.add_argument("-o", "--out", type=str, default="-",
                           help="witness JSON file to write, '-' for standard output (default)")
    subparser.set_defaults(func=synthesize)


def add_fourier_check(subparser: argparse.ArgumentParser) -> None:
    add_config(subparser, required=False)
    subparser.add_argument("-r", "--rank", type=int, default=1,
                           help="rank of the torus when no system is given (default 1)")
    subparser.add_argument("-k", "--components", type=int, default=1,
                           help="number of components when no system is given (default 1)")
    subparser.add_argument("-N", "--grid-size", type=int,
                           help="even grid size per axis (default from the settings, 16)")
    subparser.add_argument("-d", "--degree", type=int,
                           help="degree of the random trigonometric polynomials (default N/2-1)")
    subparser.add_argument("-s", "--samples", type=int, default=10,
                           help="number of random samples (default 10)")
    subparser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    subparser.add_argument("--tolerance", type=float, default=1e-10,
                           help="largest acceptable error (default 1e-10)")
    subparser.add_argument("-o", "--out", type=str, help="write the errors as JSON")
    subparser.set_defaults(func=fourier_check)


def add_selftest(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("--quick", action="store_true",
                           help="skip the verdict fixtures and the counterexample round trip")
    subparser.add_argument("--seed", type=int, default=20240101,
                           help="seed of the random instances")
    add_threads(subparser)
    subparser.set_defaults(func=run_selftest)


def add_groups(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("group", type=str, help="the group: 'torus:<r>' or 'su2'")
    subparser.add_argument("-l", "--cutoff", type=float, required=True,
                           help="list every representation with <xi> <= CUTOFF")
    subparser.set_defaults(func=list_reps)
