"""
User environment settings: configuration search path and thread override.
"""

import os
from importlib.abc import Traversable
from importlib.resources import files
from pathlib import Path
from typing import Optional, Union

from ghx.print import print_error

PathName = Union[Path, Traversable]


class Environ:
    """
    Holds the environment details used by `ghx`: the configuration directories searched
    for settings and system files and the $GHX_THREADS override.
    """

    def __init__(self):
        self._home_dir = os.path.expanduser("~")
        pkg_dir = files("ghx")
        # for tests, only the bundled configurations should be used
        self._configuration_dirs: list[PathName] = []
        if os.environ.get("GHX_TESTING"):
            self._configuration_dirs = [pkg_dir.joinpath("conf")]
        else:
            self._configuration_dirs = [Path(f"{self._home_dir}/.config/ghx"),
                                        pkg_dir.joinpath("conf")]
        threads = os.environ.get("GHX_THREADS", "").strip()
        self._threads_override: Optional[int] = None
        if threads:
            try:
                self._threads_override = int(threads)
            except ValueError:
                print_error(f"Ignoring invalid $GHX_THREADS='{threads}'")

    def search_config_path(self, conf_path: str, quiet: bool = False) -> PathName:
        """
        Search for given configuration path in user and system configuration directories
        (in that order). The path may refer to a file or a subdirectory. Absolute paths and
        paths that exist relative to the current directory are returned as is.

        :param conf_path: the configuration file to search (expected to be a relative path)
        :param quiet: if False then prints an error message on standard error on failure
        :return: the path of the configuration file as `Path` or resource file from
                 importlib (`Traversable`)
        """
        if os.path.isabs(conf_path) or os.access(conf_path, os.R_OK):
            return Path(conf_path)
        for config_dir in self._configuration_dirs:
            path = config_dir.joinpath(conf_path)
            if os.access(path, os.R_OK):  # type: ignore
                return path
        search_dirs = ", ".join([str(file) for file in self._configuration_dirs])
        if not quiet:
            print_error(f"Configuration file '{conf_path}' not found in [{search_dirs}]")
        raise FileNotFoundError(f"Configuration file '{conf_path}' not found in [{search_dirs}]")

    @property
    def configuration_dirs(self) -> list[PathName]:
        """directories searched for configuration files, in order"""
        return list(self._configuration_dirs)

    @property
    def threads_override(self) -> Optional[int]:
        """value of $GHX_THREADS if set, which overrides --threads"""
        return self._threads_override
