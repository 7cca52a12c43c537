"""
Synthesize and check the counterexample of a system failing the growth condition.
"""

import argparse

from ghx.counterexample import (build_witness, find_violations, verify_witness,
                                witness_field_profile)
from ghx.fourier import decay_classify_profile
from ghx.groups import format_rep
from ghx.print import print_error, print_info, print_notice
from ghx.report import meta, witness_to_list, write_document
from ghx.settings import Consts, Settings
from ghx.util import NumericalError

from . import load_config, open_output


def synthesize(args: argparse.Namespace, settings: Settings) -> int:
    """
    Search a violating sequence up to --max-cutoff, build the witness u and verify it. The
    witness is written as JSON to --out (standard output by default) together with the decay
    classification of the coefficients of u and of P u.

    :param args: arguments having `config`, `max_cutoff`, `max_length` and `out`
    :param settings: the loaded `Settings`
    :return: 0 when no violation exists or the witness verifies, else 1
    """
    config = load_config(args, settings)
    max_length = args.max_length or settings.max_witness_length
    violations = find_violations(config.system, args.max_cutoff, max_length)
    header = meta("witness", group=str(config.group), source=config.source,
                  max_cutoff=args.max_cutoff, max_length=max_length)
    if not violations:
        print_notice(f"No violation of the growth condition up to <xi> = {args.max_cutoff:g}")
        with open_output(args.out) as out:
            write_document(out, {"meta": header, "witness": [],
                                 "check": {"passed": True, "failures": []}}, settings.precision)
        return Consts.exit_ok()
    witness = build_witness(config.system, violations)
    check = verify_witness(config.system, witness)
    doc = {"meta": header, "witness": witness_to_list(witness),
           "check": {"passed": check.passed, "failures": check.failures}}
    for key, system in (("u_decay", None), ("image_decay", config.system)):
        try:
            decay = decay_classify_profile(witness_field_profile(witness, system),
                                           settings.max_rapid_decay_power)
            doc[key] = {"exponent": decay.exponent, "rapid_decay": decay.rapid_decay,
                        "sample_count": decay.sample_count}
        except NumericalError as ex:
            doc[key] = {"error": str(ex)}
    with open_output(args.out) as out:
        write_document(out, doc, settings.precision)
    last = witness.terms[-1]
    print_info(f"Found {len(witness.terms)} violating representation(s), the last one "
               f"{format_rep(config.group, last.xi)} with image norm {last.image_norm:.6g}")
    if not check.passed:
        for failure in check.failures:
            print_error(failure)
        return 1
    return Consts.exit_ok()
