"""Tests for `ghx/symbols.py`"""

import math
import unittest

import numpy as np

from ghx.groups import GroupId, enumerate_reps, rep_meta
from ghx.symbols import (ScalarSymbol, add, bessel_symbol, compose, estimate_order, hs_norm,
                         max_norm, op_norm, poly_value, scale, su2_angular_momentum,
                         su2_casimir_symbol, su2_field_symbol, su2_ladder,
                         su2_sublaplacian_symbol, table_symbol, torus_poly_symbol, zero_symbol)
from ghx.util import EvaluationError, NotSupportedError


class TestSymbols(unittest.TestCase):
    """unit tests for the `ghx.symbols` module"""

    _t1 = GroupId.torus(1)
    _t2 = GroupId.torus(2)
    _su2 = GroupId.su2()

    def test_torus_poly(self) -> None:
        """check the multipliers of constant coefficient operators"""
        d1 = torus_poly_symbol(self._t2, [((1, 0), 1)])
        np.testing.assert_allclose([[3j]], d1((3, 4)), atol=1e-15)
        self.assertEqual(1.0, d1.order)
        laplace = torus_poly_symbol(self._t2, [((2, 0), 1), ((0, 2), 1)])
        self.assertEqual(-25.0, laplace((3, 4))[0, 0].real)
        self.assertEqual(2.0, laplace.order)
        one_minus = torus_poly_symbol(self._t1, [((0,), 1), ((2,), -1)])
        self.assertEqual(1.0 + 49.0, one_minus((7,))[0, 0].real)
        self.assertEqual(-8j, poly_value([((3,), 1)], (2,)))
        self.assertRaises(ValueError, torus_poly_symbol, self._t2, [((1,), 1)])
        self.assertRaises(ValueError, torus_poly_symbol, self._t1, [((-1,), 1)])
        self.assertRaises(NotSupportedError, torus_poly_symbol, self._su2, [((1,), 1)])

    def test_empty_and_zero(self) -> None:
        """check that empty and cancelling coefficient lists give zero symbols"""
        empty = torus_poly_symbol(self._t1, [])
        self.assertTrue(empty.is_zero)
        self.assertEqual(0.0, empty.order)
        self.assertIn("empty-coefficients", empty.flags)
        np.testing.assert_array_equal([[0]], empty((5,)))
        cancel = torus_poly_symbol(self._t1, [((1,), 1), ((1,), -1)])
        self.assertTrue(cancel.is_zero)
        self.assertEqual(-math.inf, cancel.order)
        zero = zero_symbol(self._su2)
        self.assertEqual((3, 3), zero((2,)).shape)
        self.assertEqual(-math.inf, estimate_order(zero, 5.0).tau_hat)

    def test_norms(self) -> None:
        """check the operator, Hilbert-Schmidt and maximum norms"""
        block = np.array([[3, 0], [4, 0]], dtype=np.complex128)
        self.assertAlmostEqual(5.0, op_norm(block), delta=1e-14)
        self.assertAlmostEqual(5.0, hs_norm(block), delta=1e-14)
        self.assertEqual(4.0, max_norm(block))
        self.assertAlmostEqual(math.sqrt(2.0), hs_norm(np.eye(2)), delta=1e-15)
        self.assertAlmostEqual(1.0, op_norm(np.eye(2)), delta=1e-15)

    def test_su2_ladder(self) -> None:
        """check the ladder matrix and the commutation relations of J"""
        np.testing.assert_allclose([[0, 1], [0, 0]], su2_ladder(1), atol=1e-15)
        j_plus = su2_ladder(2)
        np.testing.assert_allclose([[0, math.sqrt(2), 0], [0, 0, math.sqrt(2)], [0, 0, 0]],
                                   j_plus, atol=1e-14)
        for twice_spin in range(8):
            j1, j2, j3 = (su2_angular_momentum(twice_spin, axis) for axis in (1, 2, 3))
            # the sign of J2 makes i*J_a a Lie algebra homomorphism
            np.testing.assert_allclose(-1j * j3, j1 @ j2 - j2 @ j1, atol=1e-12)
            np.testing.assert_allclose(j1, j1.conj().T, atol=1e-14)
            np.testing.assert_allclose(j2, j2.conj().T, atol=1e-14)
        self.assertRaises(ValueError, su2_angular_momentum, 2, 4)

    def test_su2_brackets(self) -> None:
        """check [D_a, D_b] = D_c cyclically and the Casimir up to spin 10"""
        fields = [su2_field_symbol(self._su2, axis) for axis in (1, 2, 3)]
        casimir = su2_casimir_symbol(self._su2)
        for xi in [(t,) for t in range(21)]:
            mats = [f(xi) for f in fields]
            for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                np.testing.assert_allclose(mats[c], mats[a] @ mats[b] - mats[b] @ mats[a],
                                           atol=1e-10)
            np.testing.assert_allclose(casimir(xi), -sum(m @ m for m in mats), atol=1e-10)
        # l = 1: sigma_3 = i diag(1, 0, -1)
        np.testing.assert_allclose(np.diag([1j, 0, -1j]), fields[2]((2,)), atol=1e-15)

    def test_su2_sublaplacian(self) -> None:
        """check that the sub-Laplacian is the sum of squares of the other two fields"""
        sub = su2_sublaplacian_symbol(self._su2)
        d1, d2 = su2_field_symbol(self._su2, 1), su2_field_symbol(self._su2, 2)
        for xi in [(t,) for t in range(12)]:
            np.testing.assert_allclose(sub(xi), -(d1(xi) @ d1(xi) + d2(xi) @ d2(xi)),
                                       atol=1e-10)
            spin = xi[0] / 2.0
            self.assertAlmostEqual(spin, float(np.min(np.linalg.eigvalsh(sub(xi)))), delta=1e-10)
        self.assertRaises(NotSupportedError, su2_sublaplacian_symbol, self._t1)
        self.assertRaises(ValueError, su2_sublaplacian_symbol, self._su2, 0)

    def test_bessel(self) -> None:
        """check the Bessel potential on both groups"""
        bessel = bessel_symbol(self._su2, -1.0)
        meta = rep_meta(self._su2, (3,))
        np.testing.assert_allclose(np.eye(4) / meta.bracket, bessel((3,)), atol=1e-15)
        self.assertEqual(-1.0, bessel.order)
        np.testing.assert_allclose([[10.0]], bessel_symbol(self._t1, 2.0)((3,)), atol=1e-12)

    def test_evaluation_errors(self) -> None:
        """check the shape and finiteness checks of evaluation"""
        wrong = ScalarSymbol("wrong", self._su2, lambda xi: np.eye(1), 0.0)
        self.assertRaises(EvaluationError, wrong, (2,))
        nan = ScalarSymbol("nan", self._t1, lambda xi: np.array([[math.nan]]), 0.0)
        with self.assertRaises(EvaluationError) as ctx:
            nan((1,))
        self.assertIn("non-finite", str(ctx.exception))
        self.assertRaises(EvaluationError, zero_symbol(self._t2), (1,))

    def test_table(self) -> None:
        """check table lookups and block size validation"""
        table = table_symbol("t", self._su2, {(0,): np.eye(1), (1,): 2 * np.eye(2)}, 1.0)
        np.testing.assert_array_equal(2 * np.eye(2), table((1,)))
        with self.assertRaises(EvaluationError) as ctx:
            table((2,))
        self.assertIn("missing representation", str(ctx.exception))
        with self.assertRaises(EvaluationError) as ctx:
            table_symbol("bad", self._su2, {(1,): np.eye(3)}, None)
        self.assertIn("wrong block size", str(ctx.exception))

    def test_combinators(self) -> None:
        """check scaling, sums and products of symbols"""
        d1 = torus_poly_symbol(self._t1, [((1,), 1)])
        one = torus_poly_symbol(self._t1, [((0,), 1)])
        one_minus = add(one, scale(-1, compose(d1, d1)))
        self.assertEqual(2.0, one_minus.order)
        np.testing.assert_allclose([[26.0]], one_minus((5,)), atol=1e-12)
        self.assertEqual((((0,), 1 + 0j), ((2,), -1 + 0j)), one_minus.polynomial)
        # cancellation lowers the order
        self.assertEqual(0.0, add(one_minus, compose(d1, d1)).order)
        self.assertTrue(add(d1, scale(-1, d1)).is_zero)
        self.assertTrue(scale(0, d1).is_zero)
        self.assertTrue(compose(d1, zero_symbol(self._t1)).is_zero)
        fields = [su2_field_symbol(self._su2, axis) for axis in (1, 2)]
        product = compose(*fields)
        self.assertEqual(2.0, product.order)
        np.testing.assert_allclose(fields[0]((3,)) @ fields[1]((3,)), product((3,)), atol=1e-14)
        self.assertIsNone(add(d1, table_symbol("t", self._t1, {}, None)).order)
        self.assertRaises(ValueError, add, d1, fields[0])
        self.assertRaises(ValueError, compose)

    def test_estimate_order(self) -> None:
        """check the order estimates and that the fitted bound holds on the sample"""
        d1 = torus_poly_symbol(self._t2, [((1, 0), 1)])
        est = estimate_order(d1, 20.0)
        self.assertGreaterEqual(est.tau_hat, 0.85)
        self.assertLessEqual(est.tau_hat, 1.02)
        for xi in enumerate_reps(self._t2, 20.0):
            self.assertLessEqual(op_norm(d1(xi)),
                                 est.c_hat * rep_meta(self._t2, xi).bracket ** est.tau_hat)
        est = estimate_order(su2_casimir_symbol(self._su2), 30.0)
        self.assertGreaterEqual(est.tau_hat, 1.9)
        self.assertLessEqual(est.tau_hat, 2.3)
        est = estimate_order(bessel_symbol(self._su2, -1.5), 20.0)
        self.assertAlmostEqual(-1.5, est.tau_hat, delta=1e-9)
        # a single sample gives order 0
        est = estimate_order(bessel_symbol(self._t1, 3.0), 1.0)
        self.assertEqual((0.0, 1), (est.tau_hat, est.sample_count))
        self.assertAlmostEqual(1.0, est.c_hat, delta=1e-11)


if __name__ == '__main__':
    unittest.main()
