"""
Acceptance suites runnable without the test tree: soundness of the inequalities and bounds,
the chain constant, the SU(2) algebra, the torus transforms, the verdicts of the bundled
fixture systems and the counterexample round trip.
"""

import argparse
import math
import time
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar
from tabulate import tabulate

from ghx.block import SystemSymbol, evaluate, smallest_singular_value
from ghx.bounds import (HALFPOWER_CONSTANT, det_chain_lower_blocks, det_hs_lower, halfpower,
                        hs_op_inequality, min_halfpower_constant, varah_lower)
from ghx.counterexample import build_witness, find_violations, verify_witness
from ghx.diagnostics import Classification, DiagnosticOptions, diagnose
from ghx.fourier import TrigPolynomial, forward, inverse, plancherel_check, quantization_check
from ghx.groups import GroupId, enumerate_reps, rep_meta
from ghx.print import print_error, print_info, print_progress
from ghx.settings import Consts, Settings
from ghx.symbols import ScalarSymbol, hs_norm, poly_value, su2_field_symbol, torus_poly_symbol
from ghx.sysconfig import load_system

from . import diagnostic_options

# relative slack of every numerical inequality
SLACK = 1e-10


class SuiteResult(NamedTuple):
    """outcome of one suite"""
    passed: bool
    detail: str


class VerdictFixture(NamedTuple):
    """a bundled system with its expected classification and fitted exponent range"""
    system: str
    expected: Classification
    k_range: Optional[tuple[float, float]] = None


VERDICT_FIXTURES = (
    VerdictFixture("grad2", Classification.GH_CONSISTENT, (0.9, 1.01)),
    VerdictFixture("d1", Classification.GH_VIOLATED),
    VerdictFixture("su2_sublaplacian", Classification.GH_CONSISTENT, (0.9, 1.1)),
    VerdictFixture("su2_d0", Classification.GH_VIOLATED),
    VerdictFixture("coupled_t1", Classification.GH_CONSISTENT))

FIXTURE_CUTOFFS = (20.0, 40.0)


def _complex_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def _below(value: float, exact: float) -> bool:
    return value <= exact + SLACK * max(1.0, exact)


def lemma_soundness(rng: np.random.Generator, count: int = 1000) -> SuiteResult:
    """||A B||_HS >= lambda_min[A] ||B||_HS for random square A and conforming B"""
    failures = 0
    for _ in range(count):
        size, cols = rng.integers(1, 9, size=2)
        a = _complex_matrix(rng, size, size)
        b = _complex_matrix(rng, size, cols)
        lhs = hs_norm(a @ b)
        rhs = smallest_singular_value(a) * hs_norm(b)
        if lhs < rhs - SLACK * max(1.0, rhs):
            failures += 1
    return SuiteResult(failures == 0, f"{failures} failure(s) in {count} pairs")


def _dominant_grid(rng: np.random.Generator, m: int, dim: int) -> list[list[np.ndarray]]:
    grid = [[_complex_matrix(rng, dim, dim) for _ in range(m)] for _ in range(m)]
    boost = rng.uniform(0.0, 3.0) * sum(hs_norm(b) for row in grid for b in row)
    for ell in range(m):
        grid[ell][ell] = grid[ell][ell] + boost * np.eye(dim)
    return grid


def bound_soundness(rng: np.random.Generator, count: int = 1000) -> SuiteResult:
    """every lower bound is below the exact smallest singular value"""
    failures: dict[str, int] = {}

    def fail(name: str) -> None:
        failures[name] = failures.get(name, 0) + 1

    for _ in range(count):
        size = int(rng.integers(2, 9))
        matrix = _complex_matrix(rng, size, size)
        if not _below(det_hs_lower(matrix), smallest_singular_value(matrix)):
            fail("det_hs")
        if not hs_op_inequality(matrix):
            fail("hs_op")
        m, dim = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        if m * dim < 2:
            m = 2
        grid = _dominant_grid(rng, m, dim) if rng.random() < 0.5 else \
            [[_complex_matrix(rng, dim, dim) for _ in range(m)] for _ in range(m)]
        full = np.block(grid)
        lam = smallest_singular_value(full)
        chain = det_chain_lower_blocks(grid)
        if not _below(chain, lam):
            fail("det_chain")
        if not _below(chain, det_hs_lower(full)):
            fail("det_chain<=det_hs")
        if (relaxed := varah_lower(grid, "relaxed")) is not None and not _below(relaxed, lam):
            fail("varah_relaxed")
        # the maximum norm version is a bound for scalar blocks
        scalar = _dominant_grid(rng, m, 1)
        if (varah := varah_lower(scalar, "max")) is not None and \
                not _below(varah, smallest_singular_value(np.block(scalar))):
            fail("varah")
    detail = ", ".join(f"{name}: {n}" for name, n in sorted(failures.items()))
    return SuiteResult(not failures, detail or f"no failures in {count} instances")


def constant_check(rng: np.random.Generator, count: int = 100_000) -> SuiteResult:
    """the chain constant against golden section search and a dense sample of x^(x/2)"""
    golden = minimize_scalar(halfpower, bracket=(0.05, 0.3, 1.0), method="golden",
                             options={"xtol": 1e-12})
    constant = min_halfpower_constant()
    errors = (abs(constant - float(golden.fun)), abs(constant - HALFPOWER_CONSTANT))
    samples = np.concatenate([rng.uniform(0.0, 10.0, count // 2),
                              np.logspace(-12, 1, count - count // 2)])
    lowest = float(np.min(samples ** (samples / 2.0)))
    passed = max(errors) <= 1e-9 and lowest >= constant - 1e-12
    return SuiteResult(passed, f"constant {constant:.12f}, golden error {errors[0]:.2e}, "
                               f"sample minimum {lowest:.12f}")


def su2_algebra(max_twice_spin: int = 20) -> SuiteResult:
    """[D1, D2] = D3 cyclically and -(D1^2 + D2^2 + D3^2) = l(l+1) I for l <= 10"""
    group = GroupId.su2()
    fields = [su2_field_symbol(group, axis) for axis in (1, 2, 3)]
    worst = 0.0
    for twice_spin in range(max_twice_spin + 1):
        xi = (twice_spin,)
        mats = [f(xi) for f in fields]
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            worst = max(worst, float(np.max(np.abs(mats[a] @ mats[b] - mats[b] @ mats[a] -
                                                   mats[c]))))
        casimir = -sum(mat @ mat for mat in mats)
        expected = rep_meta(group, xi).casimir * np.eye(twice_spin + 1)
        worst = max(worst, float(np.max(np.abs(casimir - expected))))
    return SuiteResult(worst <= 1e-10, f"largest entry error {worst:.2e}")


def _random_poly(rng: np.random.Generator, group: GroupId, max_order: int = 2) -> ScalarSymbol:
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        alpha = tuple(int(a) for a in rng.integers(0, max_order + 1, size=group.rank))
        terms.append((alpha, complex(rng.standard_normal(), rng.standard_normal())))
    return torus_poly_symbol(group, terms)


def torus_fourier(rng: np.random.Generator, count: int = 100) -> SuiteResult:
    """round trip, Plancherel and the quantization formula on random band-limited data"""
    worst = {"round trip": 0.0, "plancherel": 0.0, "quantization": 0.0}
    for _ in range(count):
        r, n = int(rng.integers(1, 3)), int(rng.integers(1, 4))
        grid_size = int(rng.choice([4, 8, 16] if r == 2 else [4, 8, 16, 32]))
        poly = TrigPolynomial.random(rng, r, n, int(rng.integers(0, grid_size // 2)))
        f = poly.sample(grid_size)
        back = inverse(forward(f), grid_size)
        worst["round trip"] = max(worst["round trip"],
                                  float(np.max(np.abs(back.values - f.values))))
        worst["plancherel"] = max(worst["plancherel"], plancherel_check(f)[2])
        # derivatives scale the values, so the multiplier systems stay at low degree
        group = GroupId.torus(r)
        m = int(rng.integers(1, 3))
        system = SystemSymbol.of(group, [[_random_poly(rng, group) for _ in range(n)]
                                         for _ in range(m)])
        small = TrigPolynomial.random(rng, r, n, int(rng.integers(0, 4)))
        worst["quantization"] = max(worst["quantization"],
                                    quantization_check(system, small, 8))
    detail = ", ".join(f"{name} {err:.2e}" for name, err in worst.items())
    return SuiteResult(max(worst.values()) <= 1e-10, detail)


def column_equality(rng: np.random.Generator, count: int = 200) -> SuiteResult:
    """lambda_min equals sqrt(sum_j |P_j(xi)|^2) for torus column systems"""
    worst = 0.0
    for _ in range(count):
        group = GroupId.torus(int(rng.integers(1, 3)))
        column = [_random_poly(rng, group, 3) for _ in range(int(rng.integers(1, 5)))]
        system = SystemSymbol.of(group, [[entry] for entry in column])
        reps = enumerate_reps(group, 10.0)
        xi = reps[int(rng.integers(0, len(reps)))]
        exact = math.sqrt(sum(abs(poly_value(entry.polynomial or (), xi)) ** 2
                              for entry in column))
        lam = evaluate(system, xi, zero_tolerance=0.0).lambda_min
        worst = max(worst, abs(lam - exact) / max(1.0, exact))
    return SuiteResult(worst <= 1e-12, f"largest relative error {worst:.2e}")


def verdict_fixtures(settings: Settings, options: DiagnosticOptions) -> SuiteResult:
    """the bundled fixtures classify as expected and agree at both cutoffs"""
    mismatches = []
    for fixture in VERDICT_FIXTURES:
        system = load_system(settings.env, fixture.system).system
        for cutoff in FIXTURE_CUTOFFS:
            print_progress(f"verdict of '{fixture.system}' at cutoff {cutoff:g}")
            result, _ = diagnose(system, cutoff, options)
            label = f"{fixture.system}@{cutoff:g}"
            if result.classification != fixture.expected:
                mismatches.append(f"{label}: {result.classification.value}")
                continue
            if fixture.k_range is not None:
                k_hat = result.criteria["main"].details["fit"]["k_hat"]
                if not fixture.k_range[0] <= k_hat <= fixture.k_range[1]:
                    mismatches.append(f"{label}: k_hat {k_hat:.4g}")
            if fixture.system == "coupled_t1" and not result.criteria["block_dominance"].holds:
                mismatches.append(f"{label}: block dominance criterion does not hold")
    return SuiteResult(not mismatches, "; ".join(mismatches) or
                       f"{len(VERDICT_FIXTURES)} fixture(s) at cutoffs "
                       f"{', '.join(f'{c:g}' for c in FIXTURE_CUTOFFS)}")


def counterexample_round_trip(settings: Settings, max_cutoff: float = 40.0) -> SuiteResult:
    """witnesses of the violated fixtures verify, consistent fixtures have few hits"""
    problems = []
    for fixture in VERDICT_FIXTURES:
        system = load_system(settings.env, fixture.system).system
        violations = find_violations(system, max_cutoff, settings.max_witness_length)
        if fixture.expected == Classification.GH_VIOLATED:
            if not violations:
                problems.append(f"{fixture.system}: no violation found")
            elif not (check := verify_witness(system, build_witness(system, violations))).passed:
                problems.append(f"{fixture.system}: {check.failures[0]}")
        elif len(violations) >= 3:
            problems.append(f"{fixture.system}: {len(violations)} hits")
    return SuiteResult(not problems, "; ".join(problems) or "all witnesses verified")


def run_selftest(args: argparse.Namespace, settings: Settings) -> int:
    """
    Run the acceptance suites and display their outcome as a table. With --quick the verdict
    fixtures and the counterexample round trip are skipped.

    :param args: arguments having `quick` and `seed`
    :param settings: the loaded `Settings`
    :return: 0 when every suite passes and 1 otherwise
    """
    rng = np.random.default_rng(args.seed)
    options = diagnostic_options(args, settings)
    suites: list[tuple[str, Callable[[], SuiteResult], bool]] = [
        ("lemma soundness", lambda: lemma_soundness(rng), False),
        ("bound soundness", lambda: bound_soundness(rng), False),
        ("chain constant", lambda: constant_check(rng), False),
        ("su2 algebra", su2_algebra, False),
        ("torus fourier", lambda: torus_fourier(rng), False),
        ("torus column equality", lambda: column_equality(rng), False),
        ("verdict fixtures", lambda: verdict_fixtures(settings, options), True),
        ("counterexample round trip", lambda: counterexample_round_trip(settings), True)]
    rows = []
    all_passed = True
    for name, suite, slow in suites:
        if slow and args.quick:
            rows.append([name, "skipped", "", ""])
            continue
        print_progress(f"running suite '{name}'")
        start = time.perf_counter()
        result = suite()
        elapsed = time.perf_counter() - start
        all_passed = all_passed and result.passed
        rows.append([name, "pass" if result.passed else "FAIL", result.detail, f"{elapsed:.2f}"])
    print(tabulate(rows, headers=["Suite", "Result", "Detail", "Seconds"], tablefmt="psql",
                   maxcolwidths=[None, None, 64, None]))
    if not all_passed:
        print_error("Some suites failed")
        return 1
    print_info("All suites passed")
    return Consts.exit_ok()
