"""Tests for `ghx/settings.py`, `ghx/env.py` and the INI readers of `ghx/util.py`"""

import os
import tempfile
import unittest
from pathlib import Path

from ghx.env import Environ
from ghx.settings import Consts, Settings
from ghx.util import ConfigError


class TestSettings(unittest.TestCase):
    """unit tests for the `ghx.settings` and `ghx.env` modules"""

    _resources = Path(__file__).parent.joinpath("resources")

    class EnvVar:
        """context manager that sets an environment variable and restores it on exit"""

        def __init__(self, name: str, value: str):
            self._name = name
            self._value = value
            self._old = os.environ.get(name)

        def __enter__(self) -> None:
            os.environ[self._name] = self._value

        def __exit__(self, ex_type, ex_val, ex_tb) -> None:
            if self._old is None:
                os.environ.pop(self._name, None)
            else:
                os.environ[self._name] = self._old

    def test_bundled_defaults(self) -> None:
        """check the values of the bundled settings"""
        with self.EnvVar("GHX_TESTING", "1"):
            env = Environ()
            settings = Settings.load(env)
        self.assertEqual(1, len(env.configuration_dirs))
        self.assertEqual(0.5, settings.tail_fraction)
        self.assertEqual(1e-12, settings.zero_tolerance)
        self.assertEqual(1e-12, settings.marginal_tolerance)
        self.assertEqual(-20.0, settings.k_floor)
        self.assertEqual(0.1, settings.order_margin_epsilon)
        self.assertEqual(3, settings.min_tail_records)
        self.assertEqual(64, settings.max_witness_length)
        self.assertEqual(16, settings.grid_size)
        self.assertEqual(10, settings.max_rapid_decay_power)
        self.assertEqual(17, settings.precision)
        self.assertIs(env, settings.env)
        self.assertEqual("ghx.ini", Consts.settings_file())
        self.assertEqual((0, 1), (Consts.exit_ok(), Consts.exit_usage()))

    def test_includes(self) -> None:
        """check that the including file takes precedence over its includes"""
        with self.EnvVar("GHX_TEST_PRECISION", "12"):
            settings = Settings.load(Environ(), str(self._resources.joinpath("settings_top.ini")))
            self.assertEqual(12, settings.precision)
        self.assertEqual(0.75, settings.tail_fraction)
        self.assertEqual(1e-10, settings.zero_tolerance)
        self.assertEqual(-12.0, settings.k_floor)
        self.assertEqual(5, settings.min_tail_records)
        # keys missing everywhere fall back to the built-in defaults
        self.assertEqual(0.1, settings.order_margin_epsilon)
        self.assertEqual(64, settings.max_witness_length)

    def test_threads(self) -> None:
        """check the precedence of $GHX_THREADS, --threads and the settings"""
        path = str(self._resources.joinpath("settings_top.ini"))
        with self.EnvVar("GHX_THREADS", ""):
            settings = Settings.load(Environ(), path)
            self.assertEqual(3, settings.threads())
            self.assertEqual(2, settings.threads(2))
            self.assertEqual(os.cpu_count() or 1, settings.threads(0))
            self.assertRaises(ConfigError, settings.threads, -1)
        with self.EnvVar("GHX_THREADS", "5"):
            settings = Settings.load(Environ(), path)
            self.assertEqual(5, settings.threads(2))
        with self.EnvVar("GHX_THREADS", "many"):
            env = Environ()
            self.assertIsNone(env.threads_override)

    def test_invalid_values(self) -> None:
        """check that malformed numbers are reported with their section"""
        with tempfile.NamedTemporaryFile("w", suffix=".ini", delete=False) as fd:
            fd.write("[scan]\ntail_fraction = half\n\n[verdict]\nmin_tail_records = 2.5\n")
        try:
            settings = Settings.load(Environ(), fd.name)
            with self.assertRaises(ConfigError) as ctx:
                _ = settings.tail_fraction
            self.assertIn("[scan]", str(ctx.exception))
            self.assertRaises(ConfigError, lambda: settings.min_tail_records)
            self.assertEqual(0.5, Settings.load(Environ()).tail_fraction)
        finally:
            os.unlink(fd.name)
        self.assertRaises(FileNotFoundError, Settings.load, Environ(), "/no/such/ghx.ini")

    def test_search_config_path(self) -> None:
        """check the lookup of bundled configuration files"""
        with self.EnvVar("GHX_TESTING", "1"):
            env = Environ()
        self.assertTrue(env.search_config_path("systems/grad2.json").is_file())
        self.assertTrue(env.search_config_path("ghx.ini").is_file())
        self.assertRaises(FileNotFoundError, env.search_config_path, "systems/none.json", True)


if __name__ == '__main__':
    unittest.main()
