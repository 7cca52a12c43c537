"""
Operations of the `ghx` command, one module per subcommand. Each exposes a function taking the
parsed `argparse.Namespace` and the `Settings` and returning the exit code.
"""

import argparse
import sys
from contextlib import contextmanager
from typing import Any, Iterator, Optional, TextIO

from ghx.diagnostics import DiagnosticOptions
from ghx.report import meta
from ghx.settings import Settings
from ghx.sysconfig import SystemConfig, load_system


def diagnostic_options(args: argparse.Namespace, settings: Settings) -> DiagnosticOptions:
    """
    Build the `DiagnosticOptions` from the settings with --tail and --threads overriding them.

    :param args: the parsed arguments
    :param settings: the loaded `Settings`
    :return: the `DiagnosticOptions`
    """
    tail = getattr(args, "tail", None)
    return DiagnosticOptions(
        tail_fraction=settings.tail_fraction if tail is None else tail,
        k_floor=settings.k_floor, min_tail_records=settings.min_tail_records,
        order_margin_epsilon=settings.order_margin_epsilon,
        zero_tolerance=settings.zero_tolerance, marginal_tolerance=settings.marginal_tolerance,
        threads=settings.threads(getattr(args, "threads", None)))


def load_config(args: argparse.Namespace, settings: Settings) -> SystemConfig:
    """load the system given with --config"""
    return load_system(settings.env, args.config)


def records_header(config: SystemConfig, cutoff: float,
                   options: DiagnosticOptions) -> dict[str, Any]:
    """
    Header of a records file embedding the system so that `ghx verdict` can re-scan it.
    The thread count is left out so that reports do not depend on it.
    """
    return meta("records", group=str(config.group), system=config.data, source=config.source,
                base_dir=config.base_dir, cutoff=cutoff, tail=options.tail_fraction)


@contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """
    Open a report file for writing, where "-" is standard output.

    :param path: the output path
    :return: the text-mode file object which is closed on exit unless it is standard output
    """
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as out:
            yield out
