"""
Utility `namedtuple`s and methods to print colored messages on the terminal.

All messages go to standard error by default so that standard output and the report files
stay machine-readable. Colors are dropped when the stream is not a terminal or `$NO_COLOR` is set.
"""

import os
import sys
from collections import namedtuple
from typing import Optional, TextIO

# define color names for printing in terminal
TermColors = namedtuple("TermColors",
                        "black red green orange blue purple cyan lightgray reset bold disable")

# foreground colors in the terminal
fgcolor = TermColors(
    "\033[30m", "\033[31m", "\033[32m", "\033[33m", "\033[34m", "\033[35m", "\033[36m",
    "\033[37m", "\033[00m", "\033[01m", "\033[02m")

# 0 = normal, negative = quiet levels, positive = verbose
_verbosity = 0


def set_verbosity(quiet: int, verbose: int) -> None:
    """
    Set the global verbosity used by `print_info` and `print_progress`.

    :param quiet: number of times -q/--quiet was given
    :param verbose: number of times -v/--verbose was given
    """
    global _verbosity  # pylint: disable=global-statement
    _verbosity = verbose - quiet


def verbosity() -> int:
    """the current verbosity level (negative is quiet, positive is verbose)"""
    return _verbosity


def _use_color(file: TextIO) -> bool:
    if os.environ.get("NO_COLOR"):
        return False
    isatty = getattr(file, "isatty", None)
    return bool(isatty and isatty())


def print_color(msg: str, fg: Optional[str] = None, end: str = "\n",
                file: Optional[TextIO] = None) -> None:
    # pylint: disable=invalid-name
    """
    Display given string on standard error (or given file) with a foreground color if provided
    and the target is a terminal.

    :param msg: the string to be displayed
    :param fg: the foreground color of the string
    :param end: the terminating string which is newline by default (or can be empty for example)
    :param file: the text-mode file object to use for writing (defaults to `sys.stderr`)
    """
    out = file if file is not None else sys.stderr
    if fg and _use_color(out):
        msg = f"{fg}{msg}{fgcolor.reset}"
    # force flush the output if it doesn't end in a newline
    print(msg, end=end, file=out, flush=end != "\n")


def print_error(msg: str, end: str = "\n", file: Optional[TextIO] = None) -> None:
    """
    Display an error string in red foreground. Errors are never suppressed by -q/--quiet.

    :param msg: the string to be displayed
    :param end: the terminating string which is newline by default (or can be empty for example)
    :param file: the text-mode file object to use for writing (defaults to `sys.stderr`)
    """
    print_color(msg, fg=fgcolor.red, end=end, file=file)


def print_warn(msg: str, end: str = "\n", file: Optional[TextIO] = None) -> None:
    """
    Display a warning string in purple foreground (suppressed only by -qq).

    :param msg: the string to be displayed
    :param end: the terminating string which is newline by default (or can be empty for example)
    :param file: the text-mode file object to use for writing (defaults to `sys.stderr`)
    """
    if _verbosity > -2:
        print_color(msg, fg=fgcolor.purple, end=end, file=file)


def print_notice(msg: str, end: str = "\n", file: Optional[TextIO] = None) -> None:
    """
    Display a string in orange foreground (suppressed by -q/--quiet).

    :param msg: the string to be displayed
    :param end: the terminating string which is newline by default (or can be empty for example)
    :param file: the text-mode file object to use for writing (defaults to `sys.stderr`)
    """
    if _verbosity >= 0:
        print_color(msg, fg=fgcolor.orange, end=end, file=file)


def print_info(msg: str, end: str = "\n", file: Optional[TextIO] = None) -> None:
    """
    Display an informational string in blue foreground (suppressed by -q/--quiet).

    :param msg: the string to be displayed
    :param end: the terminating string which is newline by default (or can be empty for example)
    :param file: the text-mode file object to use for writing (defaults to `sys.stderr`)
    """
    if _verbosity >= 0:
        print_color(msg, fg=fgcolor.blue, end=end, file=file)


def print_progress(msg: str, file: Optional[TextIO] = None) -> None:
    """display a cyan progress line, only with -v/--verbose"""
    if _verbosity > 0:
        print_color(msg, fg=fgcolor.cyan, file=file)
