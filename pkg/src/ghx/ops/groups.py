"""
Display the enumeration of the dual of a group.
"""

import argparse

from tabulate import tabulate

from ghx.groups import dimension_bound, enumerate_reps, format_rep, parse_group, rep_meta, \
    weyl_constant_check
from ghx.print import print_info
from ghx.settings import Consts, Settings


def list_reps(args: argparse.Namespace, settings: Settings) -> int:
    # pylint: disable=unused-argument
    """
    Print every representation with <xi> <= --cutoff with d_xi, nu_xi and <xi>, followed by
    the Weyl constant of the enumeration.

    :param args: arguments having `group` and `cutoff`
    :param settings: the loaded `Settings`
    :return: integer exit status where 0 represents success
    """
    group = parse_group(args.group)
    rows = []
    for xi in enumerate_reps(group, args.cutoff):
        rep = rep_meta(group, xi)
        rows.append([format_rep(group, xi), rep.dim, f"{rep.casimir:g}", f"{rep.bracket:.6g}"])
    print(tabulate(rows, headers=["xi", "d_xi", "nu_xi", "<xi>"], tablefmt="psql"))
    bound = dimension_bound(group)
    print_info(f"{len(rows)} representation(s) of {group}; Weyl constant "
               f"C_G = {weyl_constant_check(group, args.cutoff):.6g}; dimension bound "
               f"{'none' if bound is None else bound}")
    return Consts.exit_ok()
