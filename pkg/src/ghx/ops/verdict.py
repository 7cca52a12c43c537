"""
Decide global hypoellipticity of a system from a records file or directly from its
configuration.
"""

import argparse
import dataclasses
import sys
from typing import Optional

from tabulate import tabulate

from ghx.diagnostics import (Classification, Verdict, check_main_criterion, scan,
                             verdict)
from ghx.print import fgcolor, print_color, print_error, print_info, print_warn
from ghx.report import meta, read_records, verdict_to_dict, write_document
from ghx.settings import Settings
from ghx.sysconfig import SystemConfig, system_from_dict
from ghx.util import GhxError

from . import diagnostic_options, load_config, open_output

_COLORS = {Classification.GH_CONSISTENT: fgcolor.green,
           Classification.GH_VIOLATED: fgcolor.red,
           Classification.INCONCLUSIVE: fgcolor.orange}


def decide(args: argparse.Namespace, settings: Settings) -> int:
    """
    Compute the `Verdict` of a system. With --config and --cutoff the system is scanned here;
    with --records the given scan is used and the re-scan at twice the cutoff is done from the
    system embedded in the records file when it can still be built.

    :param args: arguments having `records` or `config` with `cutoff`, and `tail`, `out`
    :param settings: the loaded `Settings`
    :return: the exit code of the classification: 0, 2 or 3
    """
    options = diagnostic_options(args, settings)
    config: Optional[SystemConfig] = None
    if args.config:
        if args.cutoff is None:
            print_error("verdict with -c/--config needs -l/--cutoff")
            return 1
        config = load_config(args, settings)
        cutoff = float(args.cutoff)
        print_info(f"Scanning '{config.system.name}' up to <xi> = {cutoff:g}")
        records = scan(config.system, cutoff, options)
        group = config.group
    elif args.records:
        header, group, records = read_records(args.records)
        cutoff = float(header["cutoff"])
        if args.tail is None and "tail" in header:
            options = dataclasses.replace(options, tail_fraction=float(header["tail"]))
        try:
            config = system_from_dict(header["system"], str(header.get("source", "")),
                                      str(header.get("base_dir", ".")))
        except (GhxError, KeyError, OSError) as ex:
            print_warn(f"Cannot rebuild the system from '{args.records}': {ex}")
    else:
        print_error("verdict needs -r/--records or -c/--config")
        return 1

    if config is None:
        main = check_main_criterion(records, None, options)
        assert main.classification is not None
        result = Verdict(main.classification,
                         ["re-scan at twice the cutoff skipped: the system configuration is "
                          "unavailable"] + main.reasons, {"main": main})
    else:
        print_info(f"Re-scanning '{config.system.name}' up to <xi> = {2.0 * cutoff:g}")
        records_hi = scan(config.system, 2.0 * cutoff, options, with_bounds=False)
        result = verdict(config.system, records, records_hi, options, cutoff)

    if args.out:
        header = meta("verdict", group=str(group), cutoff=cutoff, tail=options.tail_fraction,
                      records=args.records or None)
        with open_output(args.out) as out:
            write_document(out, verdict_to_dict(result, header), settings.precision, group)
    if args.out != "-":
        print_summary(result)
    return result.classification.exit_code


def print_summary(result: Verdict) -> None:
    """display the criteria as a table followed by the colored classification"""
    rows = [[name, "" if frag.classification is None else frag.classification.value,
             "" if frag.holds is None else str(frag.holds).lower(),
             "; ".join(frag.reasons)] for name, frag in result.criteria.items()]
    print(tabulate(rows, headers=["Criterion", "Classification", "Holds", "Reasons"],
                   tablefmt="psql", maxcolwidths=[None, None, None, 72]))
    for line in result.evidence:
        if line.startswith("inconsistency"):
            print_warn(line)
    print_color(result.classification.value, fg=_COLORS[result.classification],
                file=sys.stdout)
