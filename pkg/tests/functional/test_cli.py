"""
Functional tests of the `ghx` command running the operations end to end on the bundled
systems with files in a temporary directory.
"""

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from typing import Optional

from ghx.run.ghx import main_argv


class TestCli(unittest.TestCase):
    """functional tests for the `ghx` command"""

    _saved_env: dict[str, Optional[str]] = {}

    @classmethod
    def setUpClass(cls) -> None:
        cls._saved_env = {name: os.environ.get(name)
                          for name in ("GHX_TESTING", "GHX_THREADS", "NO_COLOR")}
        os.environ["GHX_TESTING"] = "1"
        os.environ["NO_COLOR"] = "1"
        os.environ.pop("GHX_THREADS", None)

    @classmethod
    def tearDownClass(cls) -> None:
        for name, value in cls._saved_env.items():
            if value is None:
                os.environ.pop(name, None)
            else:
                os.environ[name] = value

    def setUp(self) -> None:
        self._tmp_dir = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with
        self.addCleanup(self._tmp_dir.cleanup)

    def _path(self, name: str) -> str:
        return os.path.join(self._tmp_dir.name, name)

    @staticmethod
    def _run(*argv: str) -> tuple[int, str, str]:
        """run `ghx` with given arguments returning the exit code, output and error text"""
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main_argv(list(argv))
        return code, out.getvalue(), err.getvalue()

    def _read(self, name: str) -> str:
        with open(self._path(name), "r", encoding="utf-8") as fd:
            return fd.read()

    def test_scan_then_verdict(self) -> None:
        """check the exit codes of verdicts computed from records files"""
        for system, expected in (("grad2", 0), ("d1", 2), ("su2_d0", 2),
                                 ("su2_sublaplacian", 0)):
            records = self._path(f"{system}.json")
            code, _, _ = self._run("scan", "-c", system, "-l", "12", "-o", records)
            self.assertEqual(0, code)
            doc = json.loads(self._read(f"{system}.json"))
            self.assertEqual("records", doc["meta"]["format"])
            self.assertEqual(12.0, doc["meta"]["cutoff"])
            self.assertNotIn("threads", doc["meta"])
            code, out, _ = self._run("verdict", "-r", records)
            self.assertEqual(expected, code, out)
            self.assertIn({0: "GH_CONSISTENT", 2: "GH_VIOLATED"}[expected], out)

    def test_verdict_from_config(self) -> None:
        """check verdicts computed directly from system configurations"""
        code, out, _ = self._run("verdict", "-c", "coupled_t1", "-l", "20")
        self.assertEqual(0, code)
        self.assertIn("block_dominance", out)
        verdict_path = self._path("verdict.json")
        code, _, _ = self._run("verdict", "-c", "d1", "-l", "10", "-o", verdict_path)
        self.assertEqual(2, code)
        doc = json.loads(self._read("verdict.json"))
        self.assertEqual("GH_VIOLATED", doc["classification"])
        self.assertEqual(2, doc["exit_code"])
        self.assertEqual("verdict", doc["meta"]["format"])
        # too few tail records to fit any growth
        code, out, _ = self._run("verdict", "-c", "bessel2_t1", "-l", "2")
        self.assertEqual(3, code)
        self.assertIn("INCONCLUSIVE", out)
        # the verdict report alone goes to standard output with "-"
        code, out, _ = self._run("verdict", "-c", "grad2", "-l", "10", "-o", "-")
        self.assertEqual(0, code)
        self.assertEqual("GH_CONSISTENT", json.loads(out)["classification"])

    def test_verdict_without_system(self) -> None:
        """check the main-only verdict when the embedded system cannot be rebuilt"""
        records = self._path("d1.json")
        self.assertEqual(0, self._run("scan", "-c", "d1", "-l", "10", "-o", records)[0])
        doc = json.loads(self._read("d1.json"))
        doc["meta"]["system"] = {"group": "torus:0", "grid": []}
        with open(records, "w", encoding="utf-8") as fd:
            json.dump(doc, fd)
        verdict_path = self._path("verdict.json")
        code, _, err = self._run("verdict", "-r", records, "-o", verdict_path)
        self.assertIn("Cannot rebuild the system", err)
        # zeros recur in the tail but their growth cannot be checked
        self.assertEqual(3, code)
        doc = json.loads(self._read("verdict.json"))
        self.assertEqual(["main"], list(doc["criteria"]))
        self.assertTrue(doc["evidence"][0].startswith("re-scan at twice the cutoff skipped"))

    def test_thread_determinism(self) -> None:
        """check that records and CSV files do not depend on the thread count"""
        outputs = []
        for threads in ("1", "4"):
            records, csv = self._path(f"records{threads}.json"), self._path(f"rec{threads}.csv")
            code, _, _ = self._run("scan", "-c", "coupled_t1", "-l", "25", "-j", threads,
                                   "-o", records, "--csv", csv)
            self.assertEqual(0, code)
            outputs.append((self._read(f"records{threads}.json"), self._read(f"rec{threads}.csv")))
        self.assertEqual(outputs[0], outputs[1])
        header = outputs[0][1].splitlines()[0]
        self.assertEqual("xi,bracket,lambda_min,det_hs,det_chain,varah,varah_relaxed", header)

    def test_scan_stdout(self) -> None:
        """check that the records go to standard output by default"""
        code, out, err = self._run("scan", "-c", "grad2", "-l", "3", "-t", "0.25")
        self.assertEqual(0, code)
        doc = json.loads(out)
        self.assertEqual(0.25, doc["meta"]["tail"])
        self.assertEqual("0,0", doc["records"][0]["xi"])
        self.assertIn("numerically singular", err)

    def test_bounds(self) -> None:
        """check the bound comparison table and files"""
        csv = self._path("bounds.csv")
        code, out, _ = self._run("bounds", "-c", "coupled_t1", "-l", "10", "--csv", csv)
        self.assertEqual(0, code)
        self.assertIn("det_chain", out)
        self.assertEqual(20, len(self._read("bounds.csv").splitlines()))
        code, out, _ = self._run("bounds", "-c", "su2_sublaplacian", "-l", "8", "-n")
        self.assertEqual(0, code)
        self.assertNotIn("det_chain", out)

    def test_counterexample(self) -> None:
        """check the witness files of violated and consistent systems"""
        witness_path = self._path("witness.json")
        code, _, _ = self._run("counterexample", "-c", "d1", "-m", "10", "-o", witness_path)
        self.assertEqual(0, code)
        doc = json.loads(self._read("witness.json"))
        self.assertEqual(19, len(doc["witness"]))
        self.assertTrue(doc["check"]["passed"])
        self.assertEqual([1, "0,0"], [doc["witness"][0]["ell"], doc["witness"][0]["xi"]])
        self.assertFalse(doc["u_decay"]["rapid_decay"])
        code, out, _ = self._run("counterexample", "-c", "su2_d0", "-m", "10", "-n", "3")
        self.assertEqual(0, code)
        self.assertEqual(3, len(json.loads(out)["witness"]))
        code, out, _ = self._run("counterexample", "-c", "bessel2_t1", "-m", "10")
        self.assertEqual(0, code)
        self.assertEqual([], json.loads(out)["witness"])

    def test_fourier_check(self) -> None:
        """check the Fourier checks with and without a system"""
        code, out, _ = self._run("fourier-check", "-r", "2", "-k", "2", "-N", "8", "-s", "3")
        self.assertEqual(0, code)
        self.assertIn("plancherel", out)
        self.assertNotIn("quantization", out)
        report = self._path("fourier.json")
        code, out, _ = self._run("fourier-check", "-c", "coupled_t1", "-s", "3", "-o", report,
                                 "--tolerance", "1e-8")
        self.assertEqual(0, code)
        doc = json.loads(self._read("fourier.json"))
        self.assertEqual(3, len(doc["quantization"]))
        self.assertEqual(3, len(doc["sobolev_membership"]))
        self.assertEqual(1, self._run("fourier-check", "-N", "8", "-d", "4")[0])

    def test_groups(self) -> None:
        """check the listing of representations"""
        code, out, _ = self._run("groups", "su2", "-l", "3")
        self.assertEqual(0, code)
        for xi in ("l=0", "l=1/2", "l=1", "l=3/2"):
            self.assertIn(xi, out)
        code, _, err = self._run("groups", "torus:x", "-l", "3")
        self.assertEqual(1, code)
        self.assertIn("ghx groups: unknown group", err)

    def test_selftest(self) -> None:
        """check that the quick acceptance suites pass"""
        code, out, _ = self._run("selftest", "--quick")
        self.assertEqual(0, code, out)
        self.assertIn("skipped", out)

    def test_errors(self) -> None:
        """check that usage and configuration errors exit with 1"""
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main_argv(["scan", "-c", "grad2"])
            self.assertEqual(1, ctx.exception.code)
            with self.assertRaises(SystemExit) as ctx:
                main_argv(["no-such-operation"])
            self.assertEqual(1, ctx.exception.code)
        with redirect_stdout(io.StringIO()), self.assertRaises(SystemExit) as ctx:
            main_argv(["--version"])
        self.assertEqual(0, ctx.exception.code)
        self.assertEqual(1, self._run("verdict", "-c", "grad2")[0])
        self.assertEqual(1, self._run("verdict")[0])
        bad = self._path("bad.json")
        with open(bad, "w", encoding="utf-8") as fd:
            fd.write('{"group": "torus:1", "grid": [[{"kind": "wave"}]]}')
        code, _, err = self._run("scan", "-c", bad, "-l", "5")
        self.assertEqual(1, code)
        self.assertIn("unknown symbol kind", err)
        self.assertEqual(1, self._run("scan", "-c", "no_such_system", "-l", "5")[0])
        self.assertEqual(1, self._run("verdict", "-r", self._path("missing.json"))[0])
        self.assertEqual(1, self._run("scan", "-c", "grad2", "-l", "0.5")[0])


if __name__ == '__main__':
    unittest.main()
