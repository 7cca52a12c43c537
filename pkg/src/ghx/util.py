"""
Common exception classes and INI configuration readers used across `ghx`.
"""

import os
from configparser import BasicInterpolation, ConfigParser, Interpolation
from pathlib import Path
from typing import Optional

from .env import PathName


class GhxError(Exception):
    """Base class of all errors raised by `ghx` that are reported to the user as-is."""


class ConfigError(GhxError):
    """
    Raised for malformed system configurations, symbol descriptors or settings.
    The message is anchored to the file, line and/or location inside the document if known.
    """

    def __init__(self, msg: str, path: Optional[str] = None, line: Optional[int] = None,
                 location: Optional[str] = None):
        self.path = path
        self.line = line
        self.location = location
        anchor = ""
        if path:
            anchor = f"{path}:{line}: " if line else f"{path}: "
        if location:
            anchor += f"{location}: "
        super().__init__(f"{anchor}{msg}")


class EvaluationError(GhxError):
    """Raised when a symbol cannot be evaluated at a representation; carries the index."""

    def __init__(self, msg: str, xi: Optional[str] = None):
        self.xi = xi
        super().__init__(f"at xi={xi}: {msg}" if xi is not None else msg)


class NotSupportedError(GhxError):
    """Raised when an operation is not supported for the given group or system shape."""


class NumericalError(GhxError):
    """Raised for non-finite input matrices or failed decompositions."""


class EnvInterpolation(BasicInterpolation):
    """
    Substitute environment variables in the values using 'os.path.expandvars'.

    This class extends `BasicInterpolation` hence the `%(.)s` syntax can be used to expand other
    keys in the same section or the `DEFAULT` section in the `before_get`. If a bare '%' is
    required in the value, then it should be escaped with a '%' i.e. use '%%' for a single '%'.

    If 'skip_expansion' is specified in initialization to a non-empty list, then no
    environment variable substitution is performed for those sections.
    """

    def __init__(self, skip_expansion: Optional[list[str]] = None):
        super().__init__()
        self._skip_expansion = skip_expansion or []

    def before_read(self, parser, section: str, option: str, value: str):
        """Override before_read to substitute environment variables."""
        if not value or section in self._skip_expansion:
            return value
        return os.path.expandvars(value)


# read the ini file, recursing into the includes to build the final dictionary
def config_reader(conf_file: PathName, interpolation: Optional[Interpolation],
                  top_level: Optional[PathName] = None) -> ConfigParser:
    """
    Read a settings INI file, recursing into the includes to build the final
    dictionary having the sections with corresponding key-value pairs. Keys of the including
    file take precedence over those of the included files.

    :param conf_file: the configuration file to be read as a `Path` or resource file from
                      importlib (`Traversable`)
    :param interpolation: if provided then used for value interpolation
    :param top_level: the top-level configuration file; don't pass this when calling
                      externally (or set it the same as `conf_file` argument)
    :return: instance of `configparser.ConfigParser` built after parsing the given file as
             well as any includes recursively
    """
    if not conf_file.is_file():
        if top_level:
            raise FileNotFoundError(f"Config file '{conf_file}' among the includes of "
                                    f"'{top_level}' does not exist or not a file")
        raise FileNotFoundError(f"Config file '{conf_file}' does not exist or not a file")
    with conf_file.open("r", encoding="utf-8") as conf_fd:
        config = ini_file_reader(conf_fd, interpolation)
    if not top_level:
        top_level = conf_file
    if not (includes := config.get("base", "includes", fallback="")):
        return config
    for include in includes.split(","):
        if not (include := include.strip()):
            continue
        inc_file = Path(include) if os.path.isabs(include) \
            else conf_file.parent.joinpath(include)  # type: ignore
        inc_conf = config_reader(inc_file, interpolation, top_level)
        for section in inc_conf.sections():
            if not config.has_section(section):
                config[section] = inc_conf[section]
            else:
                conf_section = config[section]
                inc_section = inc_conf[section]
                for key in inc_section:
                    if key not in conf_section:
                        conf_section[key] = inc_section[key]
    return config


def ini_file_reader(fd, interpolation: Optional[Interpolation]) -> ConfigParser:
    """
    Read an INI file from a given file handle allowing only '=' as delimiter and
    case-sensitive keys.

    :param fd: file handle for the INI format data
    :param interpolation: if provided then used for value interpolation
    :return: instance of `configparser.ConfigParser` built after parsing the given file
    """
    config = ConfigParser(interpolation=interpolation, delimiters="=")
    config.optionxform = str  # type: ignore
    config.read_file(fd)
    return config
