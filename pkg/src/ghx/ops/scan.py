"""
Scan a system over the truncated dual and write the per representation records.
"""

import argparse

from ghx.diagnostics import scan
from ghx.print import print_info, print_warn
from ghx.report import write_csv, write_records
from ghx.settings import Consts, Settings

from . import diagnostic_options, load_config, open_output, records_header


def scan_system(args: argparse.Namespace, settings: Settings) -> int:
    """
    Evaluate the system given by --config at every representation with <xi> <= --cutoff and
    write the records as JSON to --out (standard output by default) and optionally as CSV.

    :param args: arguments having `config`, `cutoff`, `out`, `csv` and `tail`
    :param settings: the loaded `Settings`
    :return: integer exit status where 0 represents success
    """
    config = load_config(args, settings)
    options = diagnostic_options(args, settings)
    print_info(f"Scanning '{config.system.name}' ({config.m}x{config.n} on {config.group}) "
               f"up to <xi> = {args.cutoff:g} with {options.threads} thread(s)")
    records = scan(config.system, args.cutoff, options)
    with open_output(args.out) as out:
        write_records(out, config.group, records, records_header(config, args.cutoff, options),
                      settings.precision)
    if args.csv:
        with open_output(args.csv) as out:
            write_csv(out, config.group, records, settings.precision)
    if zeros := sum(1 for r in records if r.zero_flag):
        print_warn(f"{zeros} of {len(records)} representation(s) have a numerically "
                   "singular symbol")
    print_info(f"Wrote {len(records)} record(s)")
    return Consts.exit_ok()
