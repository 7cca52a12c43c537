"""
Tool settings read from the `ghx.ini` file and fixed names used by `ghx`.
"""

import os
from configparser import ConfigParser
from typing import Optional

from .env import Environ
from .util import ConfigError, EnvInterpolation, config_reader


class Consts:
    """
    Defines fixed file names and format versions used by `ghx` that are not configurable.
    """

    @staticmethod
    def settings_file() -> str:
        """name of the settings file searched in the configuration directories"""
        return "ghx.ini"

    @staticmethod
    def systems_dir() -> str:
        """subdirectory of the configuration directories holding system JSON files"""
        return "systems"

    @staticmethod
    def records_format() -> str:
        """version of the records/verdict/witness report format written by this release"""
        return "1.0"

    @staticmethod
    def exit_ok() -> int:
        """exit code for success and for GH_CONSISTENT verdicts"""
        return 0

    @staticmethod
    def exit_usage() -> int:
        """exit code for usage and configuration errors"""
        return 1


class Settings:
    """
    Typed view over the `ghx.ini` settings. Each property reads its key with the built-in
    default as fallback so that a partial user file is valid.
    """

    def __init__(self, env: Environ, config: ConfigParser):
        self._env = env
        self._config = config

    @staticmethod
    def load(env: Environ, path: Optional[str] = None) -> "Settings":
        """
        Load the settings from given path or else search `ghx.ini` in the configuration
        directories (user directory first, then the bundled one).

        :param env: the current `Environ`
        :param path: explicit settings file, if any
        :return: the loaded `Settings`
        """
        conf_file = env.search_config_path(path or Consts.settings_file(), quiet=True)
        return Settings(env, config_reader(conf_file, EnvInterpolation()))

    @property
    def env(self) -> Environ:
        """the `Environ` object used for these settings"""
        return self._env

    def _float(self, section: str, key: str, fallback: float) -> float:
        try:
            return self._config.getfloat(section, key, fallback=fallback)
        except ValueError as ex:
            raise ConfigError(f"invalid number for '{key}': {ex}",
                              location=f"[{section}]") from ex

    def _int(self, section: str, key: str, fallback: int) -> int:
        try:
            return self._config.getint(section, key, fallback=fallback)
        except ValueError as ex:
            raise ConfigError(f"invalid integer for '{key}': {ex}",
                              location=f"[{section}]") from ex

    @property
    def tail_fraction(self) -> float:
        """fraction of the enumeration (by <xi>) forming the tail window"""
        return self._float("scan", "tail_fraction", 0.5)

    @property
    def zero_tolerance(self) -> float:
        """relative tolerance below which a smallest singular value is a numerical zero"""
        return self._float("scan", "zero_tolerance", 1e-12)

    @property
    def marginal_tolerance(self) -> float:
        """dominance slacks below this are flagged as marginal"""
        return self._float("scan", "marginal_tolerance", 1e-12)

    @property
    def k_floor(self) -> float:
        """lowest power tested when searching for super-polynomial decay"""
        return self._float("verdict", "k_floor", -20.0)

    @property
    def order_margin_epsilon(self) -> float:
        """slack allowed between the block dominance exponent and the fitted growth"""
        return self._float("verdict", "order_margin_epsilon", 0.1)

    @property
    def min_tail_records(self) -> int:
        """minimum number of nonzero tail records needed for a growth fit"""
        return self._int("verdict", "min_tail_records", 3)

    @property
    def max_witness_length(self) -> int:
        """maximum length of a counterexample violation sequence"""
        return self._int("counterexample", "max_length", 64)

    @property
    def grid_size(self) -> int:
        """default grid size N per axis for torus Fourier checks"""
        return self._int("fourier", "grid_size", 16)

    @property
    def max_rapid_decay_power(self) -> int:
        """largest power N tested when classifying coefficient decay"""
        return self._int("fourier", "max_rapid_decay_power", 10)

    @property
    def precision(self) -> int:
        """significant digits of floats in the reports"""
        return self._int("output", "precision", 17)

    def threads(self, requested: Optional[int] = None) -> int:
        """
        Resolve the worker thread count: $GHX_THREADS overrides the command-line value
        which overrides `[scan] threads`; 0 means one thread per CPU.

        :param requested: the value of --threads, if given
        :return: the positive number of threads to use
        """
        if (threads := self._env.threads_override) is None:
            threads = requested if requested is not None else self._int("scan", "threads", 0)
        if threads < 0:
            raise ConfigError(f"thread count must be non-negative but got {threads}")
        return threads or (os.cpu_count() or 1)
