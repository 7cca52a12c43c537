"""
Compare the lower bounds of the smallest singular value against the exact value.
"""

import argparse
from typing import Optional

from tabulate import tabulate

from ghx.bounds import check_hs_factors, check_report
from ghx.diagnostics import scan
from ghx.groups import format_rep
from ghx.print import print_error, print_info, print_notice
from ghx.report import write_csv, write_records
from ghx.settings import Consts, Settings

from . import diagnostic_options, load_config, open_output, records_header


def _cell(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


def compare_bounds(args: argparse.Namespace, settings: Settings) -> int:
    """
    Scan the system given by --config and display, for every representation up to --cutoff,
    lambda_min next to each applicable lower bound. Any bound above lambda_min is reported as
    an error since every one of them must be sound.

    :param args: arguments having `config`, `cutoff`, `out` and `csv`
    :param settings: the loaded `Settings`
    :return: 0 when every bound is below lambda_min and 1 otherwise
    """
    config = load_config(args, settings)
    if not config.system.is_square:
        print_notice(f"'{config.system.name}' is {config.m}x{config.n}: the determinant and "
                     "dominance bounds need a square system")
    options = diagnostic_options(args, settings)
    records = scan(config.system, args.cutoff, options)
    rows = []
    unsound = []
    for r in records:
        assert r.bounds is not None
        if failures := check_report(r.bounds) + check_hs_factors(r.bounds):
            unsound.append(f"{format_rep(config.group, r.xi)}: {', '.join(failures)}")
        rows.append([format_rep(config.group, r.xi), f"{r.bracket:.6g}", f"{r.lambda_min:.6g}",
                     _cell(r.bounds.det_hs), _cell(r.bounds.det_chain), _cell(r.bounds.varah),
                     _cell(r.bounds.varah_relaxed), "marginal" if r.bounds.marginal else ""])
    if not args.quiet_table:
        print(tabulate(rows, headers=["xi", "<xi>", "lambda_min", "det_hs", "det_chain",
                                      "varah", "varah_relaxed", "note"], tablefmt="psql"))
    if args.out:
        with open_output(args.out) as out:
            write_records(out, config.group, records,
                          records_header(config, args.cutoff, options), settings.precision)
    if args.csv:
        with open_output(args.csv) as out:
            write_csv(out, config.group, records, settings.precision)
    if unsound:
        print_error(f"Lower bounds exceed the exact value at {len(unsound)} representation(s):")
        for line in unsound:
            print_error(f"  {line}")
        return 1
    print_info(f"All bounds are below lambda_min at {len(records)} representation(s)")
    return Consts.exit_ok()
