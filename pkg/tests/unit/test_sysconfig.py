"""Tests for `ghx/sysconfig.py`"""

import json
import os
import tempfile
import unittest
from pathlib import Path
from typing import Any

import numpy as np

from ghx.block import evaluate
from ghx.env import Environ
from ghx.groups import GroupId
from ghx.sysconfig import SYMBOL_KINDS, load_system, resolve_system_path, system_from_dict
from ghx.util import ConfigError, EvaluationError


class TestSysConfig(unittest.TestCase):
    """unit tests for the `ghx.sysconfig` module"""

    _env = Environ()
    _resources = Path(__file__).parent.joinpath("resources")

    def _check_error(self, data: Any, expected: str) -> None:
        with self.assertRaises(ConfigError) as ctx:
            system_from_dict(data, "test.json", ".")
        self.assertIn(expected, str(ctx.exception))
        self.assertTrue(str(ctx.exception).startswith("test.json: "))

    def test_bundled_systems(self) -> None:
        """check that every bundled system loads by its bare name"""
        for name, group, shape in (("grad2", "torus:2", (2, 1)), ("d1", "torus:2", (1, 1)),
                                   ("d1d1", "torus:2", (2, 1)), ("coupled_t1", "torus:1", (2, 2)),
                                   ("upper_t1", "torus:1", (2, 2)),
                                   ("bessel2_t1", "torus:1", (1, 1)),
                                   ("su2_sublaplacian", "su2", (1, 1)),
                                   ("su2_d0", "su2", (1, 1)), ("su2_bessel_m1", "su2", (1, 1))):
            config = load_system(self._env, name)
            self.assertEqual(group, str(config.group))
            self.assertEqual(shape, (config.m, config.n))
            self.assertTrue(config.source.endswith(f"systems/{name}.json"))
            self.assertEqual(config.data["group"], group)
        self.assertEqual("gradient on T^2", load_system(self._env, "grad2").system.name)
        self.assertRaises(FileNotFoundError, load_system, self._env, "no_such_system")

    def test_resolve_path(self) -> None:
        """check that existing paths are used as is and bare names are searched"""
        path = str(self._resources.joinpath("coupled_sum.json"))
        self.assertEqual(Path(path), resolve_system_path(self._env, path))
        self.assertTrue(str(resolve_system_path(self._env, "grad2.json")).endswith(
            "systems/grad2.json"))

    def test_combinators(self) -> None:
        """check the sum, product, scaled and bessel kinds against the bundled system"""
        config = load_system(self._env, str(self._resources.joinpath("coupled_sum.json")))
        bundled = load_system(self._env, "coupled_t1").system
        self.assertEqual("coupled_sum", config.system.name)
        self.assertEqual("d", config.system.entry(0, 1).name)
        for xi in ((0,), (3,), (-7,)):
            np.testing.assert_allclose(evaluate(bundled, xi).matrix,
                                       evaluate(config.system, xi).matrix, atol=1e-12)

    def test_table(self) -> None:
        """check tabulated symbols with paths relative to the system file"""
        config = load_system(self._env, str(self._resources.joinpath("su2_table_system.json")))
        self.assertEqual(str(self._resources), config.base_dir)
        entry = config.system.entry(0, 0)
        self.assertEqual(0.0, entry.order)
        np.testing.assert_array_equal([[2]], entry((0,)))
        np.testing.assert_array_equal(np.diag([1, 3j]), entry((1,)))
        np.testing.assert_array_equal(np.diag([1j, 1, -1]), entry((2,)))
        self.assertAlmostEqual(1.0, evaluate(config.system, (2,)).lambda_min, delta=1e-14)
        self.assertRaises(EvaluationError, entry, (3,))

    def test_table_errors(self) -> None:
        """check the errors of malformed tables"""
        with tempfile.TemporaryDirectory() as tmp_dir:
            for table, expected in (({"l=1/2": [[1, 0]]}, "wrong block size"),
                                    ({"l=1/2": [1, 0, 0, 1]}, "[re, im] pairs"),
                                    ({"l=2/2": [[1, 0]]}, "l=2/2"),
                                    ([1, 2], "JSON object keyed by index")):
                with open(os.path.join(tmp_dir, "table.json"), "w", encoding="utf-8") as fd:
                    json.dump(table, fd)
                with self.assertRaises(ConfigError) as ctx:
                    system_from_dict({"group": "su2", "grid": [[
                        {"kind": "table", "path": "table.json"}]]}, "test.json", tmp_dir)
                self.assertIn(expected, str(ctx.exception))
            with self.assertRaises(ConfigError) as ctx:
                system_from_dict({"group": "su2", "grid": [[
                    {"kind": "table", "path": "missing.json"}]]}, "test.json", tmp_dir)
            self.assertIn("cannot read table", str(ctx.exception))

    def test_malformed(self) -> None:
        """check that malformed configurations are rejected with their location"""
        d1 = {"kind": "torus_poly", "coeffs": [{"alpha": [1], "re": 1}]}
        self._check_error([], "must be a JSON object")
        self._check_error({"group": "torus:0", "grid": [[d1]]}, "group: ")
        self._check_error({"group": "torus:1", "grid": []}, "non-empty list")
        self._check_error({"group": "torus:1", "grid": [[]]}, "non-empty list")
        self._check_error({"group": "torus:1", "m": 2, "grid": [[d1]]},
                          "'m' is 2 but the grid has 1")
        self._check_error({"group": "torus:1", "grid": [[d1, d1], [d1]]}, "same length")
        self._check_error({"group": "torus:1", "grid": [[{"kind": "wave"}]]},
                          "grid[0][0]: unknown symbol kind 'wave'")
        self._check_error({"group": "torus:1", "grid": [[5]]}, "must be a JSON object")
        self._check_error({"group": "torus:1", "grid": [[
            {"kind": "torus_poly", "coeffs": [{"alpha": [1.5], "re": 1}]}]]},
                          "grid[0][0].coeffs[0]: 'alpha' must be a list of integers")
        self._check_error({"group": "torus:1", "grid": [[
            {"kind": "torus_poly", "coeffs": [{"alpha": [1, 0], "re": 1}]}]]}, "grid[0][0]")
        self._check_error({"group": "torus:1", "grid": [[{"kind": "bessel", "s": "x"}]]},
                          "'s' must be a number")
        self._check_error({"group": "torus:1", "grid": [[{"kind": "su2_casimir"}]]},
                          "grid[0][0]: ")
        self._check_error({"group": "torus:1", "grid": [[{"kind": "sum", "terms": []}]]},
                          "'terms' must be a non-empty list")
        self._check_error({"group": "torus:1", "grid": [[{"kind": "scaled", "re": 2}]]},
                          "grid[0][0].symbol: symbol descriptor must be a JSON object")
        self.assertIn("scaled", SYMBOL_KINDS)

    def test_invalid_json(self) -> None:
        """check that JSON syntax errors carry the file and line"""
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fd:
            fd.write('{"group": "torus:1",\n "grid": [[}\n')
        try:
            with self.assertRaises(ConfigError) as ctx:
                load_system(self._env, fd.name)
            self.assertEqual(fd.name, ctx.exception.path)
            self.assertEqual(2, ctx.exception.line)
        finally:
            os.unlink(fd.name)

    def test_overrides(self) -> None:
        """check the order and name overrides of descriptors"""
        config = system_from_dict({"group": "torus:1", "grid": [[
            {"kind": "zero", "order": -2, "name": "nothing"}]]}, "inline", ".")
        self.assertEqual(-2.0, config.system.entry(0, 0).order)
        self.assertEqual("nothing", config.system.entry(0, 0).name)
        self.assertEqual(GroupId.torus(1), config.group)
        self.assertEqual("inline", config.system.name)


if __name__ == '__main__':
    unittest.main()
