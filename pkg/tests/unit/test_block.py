"""Tests for `ghx/block.py`"""

import math
import unittest

import numpy as np

from ghx.block import (SystemSymbol, apply, assemble, evaluate, singular_values,
                       smallest_singular_value)
from ghx.groups import GroupId, enumerate_reps
from ghx.symbols import (ScalarSymbol, hs_norm, su2_field_symbol, su2_sublaplacian_symbol,
                         torus_poly_symbol, zero_symbol)
from ghx.util import EvaluationError, NumericalError


class TestBlock(unittest.TestCase):
    """unit tests for the `ghx.block` module"""

    _t1 = GroupId.torus(1)
    _t2 = GroupId.torus(2)
    _su2 = GroupId.su2()

    def _gradient(self) -> SystemSymbol:
        return SystemSymbol.of(self._t2, [[torus_poly_symbol(self._t2, [((1, 0), 1)])],
                                          [torus_poly_symbol(self._t2, [((0, 1), 1)])]], "grad")

    def test_system_shape(self) -> None:
        """check the validation and the shape properties of systems"""
        grad = self._gradient()
        self.assertEqual((2, 1), (grad.m, grad.n))
        self.assertFalse(grad.is_square)
        self.assertFalse(grad.is_diagonal)
        d1 = torus_poly_symbol(self._t1, [((1,), 1)])
        diag = SystemSymbol.of(self._t1, [[d1, zero_symbol(self._t1)],
                                          [zero_symbol(self._t1), d1]])
        self.assertTrue(diag.is_square)
        self.assertTrue(diag.is_diagonal)
        self.assertRaises(ValueError, SystemSymbol.of, self._t1, [])
        self.assertRaises(ValueError, SystemSymbol.of, self._t1, [[d1, d1], [d1]])
        self.assertRaises(ValueError, SystemSymbol.of, self._t1, [[su2_field_symbol(self._su2, 1)]])

    def test_gradient(self) -> None:
        """check that lambda_min of the gradient is |xi| with a zero at the origin"""
        grad = self._gradient()
        for xi in enumerate_reps(self._t2, 10.0):
            ev = evaluate(grad, xi)
            self.assertEqual((2, 1), ev.matrix.shape)
            self.assertAlmostEqual(math.hypot(*xi), ev.lambda_min, delta=1e-12)
            self.assertIsNone(ev.det)
            self.assertEqual(xi == (0, 0), ev.numerical_zero)
        ev = evaluate(grad, (3, 4))
        self.assertAlmostEqual(5.0, ev.hs_norm, delta=1e-12)
        self.assertAlmostEqual(5.0, ev.op_norm, delta=1e-12)
        self.assertFalse(ev.matrix.flags.writeable)

    def test_wide_systems(self) -> None:
        """check that systems with more unknowns than equations have lambda_min = 0"""
        d1 = torus_poly_symbol(self._t1, [((1,), 1)])
        wide = SystemSymbol.of(self._t1, [[d1, d1]])
        ev = evaluate(wide, (3,))
        self.assertEqual(0.0, ev.lambda_min)
        self.assertTrue(ev.numerical_zero)
        self.assertEqual(0.0, smallest_singular_value(np.ones((1, 2))))

    def test_su2_assembly(self) -> None:
        """check the assembled block sizes and the sub-Laplacian lambda_min on SU(2)"""
        sub = SystemSymbol.of(self._su2, [[su2_sublaplacian_symbol(self._su2)]])
        for t in range(10):
            ev = evaluate(sub, (t,))
            self.assertEqual((t + 1, t + 1), ev.matrix.shape)
            self.assertEqual(t == 0, ev.numerical_zero)
            self.assertAlmostEqual(t / 2.0, ev.lambda_min, delta=1e-10)
        fields = SystemSymbol.of(self._su2, [[su2_field_symbol(self._su2, 1)],
                                             [su2_field_symbol(self._su2, 2)]])
        self.assertEqual((6, 3), assemble(fields, (2,)).shape)

    def test_determinant(self) -> None:
        """check the determinant of square systems"""
        d1 = torus_poly_symbol(self._t1, [((1,), 1)])
        one = torus_poly_symbol(self._t1, [((0,), 1)])
        sys = SystemSymbol.of(self._t1, [[one, d1], [d1, one]])
        # det [[1, i xi], [i xi, 1]] = 1 + xi^2
        ev = evaluate(sys, (3,))
        self.assertIsNotNone(ev.det)
        self.assertAlmostEqual(10.0, ev.det.real, delta=1e-12)  # type: ignore
        self.assertAlmostEqual(0.0, ev.det.imag, delta=1e-12)  # type: ignore

    def test_scaling(self) -> None:
        """check that scaling a system scales lambda_min by the modulus"""
        grad = self._gradient()
        for coeff in (2.0, -0.5, 3j, 1 + 1j):
            scaled = grad.scaled(coeff)
            for xi in ((1, 2), (-3, 5)):
                self.assertAlmostEqual(abs(coeff) * evaluate(grad, xi).lambda_min,
                                       evaluate(scaled, xi).lambda_min, delta=1e-10)

    def test_lemma_inequality(self) -> None:
        """check ||A B||_HS >= lambda_min[A] ||B||_HS on random complex pairs"""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            size, cols = rng.integers(1, 9, size=2)
            a = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
            b = rng.standard_normal((size, cols)) + 1j * rng.standard_normal((size, cols))
            rhs = smallest_singular_value(a) * hs_norm(b)
            self.assertGreaterEqual(hs_norm(a @ b), rhs - 1e-10 * max(1.0, rhs))

    def test_singular_values(self) -> None:
        """check the singular values and the rejection of non-finite input"""
        np.testing.assert_allclose([3.0, 2.0], singular_values(np.diag([2.0, -3.0])),
                                   atol=1e-14)
        self.assertRaises(NumericalError, singular_values, np.array([[math.inf]]))
        bad = ScalarSymbol("bad", self._t1, lambda xi: np.array([[math.nan]]), 0.0)
        self.assertRaises(EvaluationError, evaluate, SystemSymbol.of(self._t1, [[bad]]), (1,))

    def test_apply(self) -> None:
        """check the action on coefficient blocks"""
        grad = self._gradient()
        image = apply(grad, (2, 3), [np.array([[1.5]])])
        np.testing.assert_allclose([[3j]], image[0], atol=1e-14)
        np.testing.assert_allclose([[4.5j]], image[1], atol=1e-14)
        self.assertRaises(ValueError, apply, grad, (2, 3), [np.eye(1), np.eye(1)])
        self.assertRaises(ValueError, apply, grad, (2, 3), [np.eye(2)])
        fields = SystemSymbol.of(self._su2, [[su2_field_symbol(self._su2, 3)]])
        u = np.zeros((3, 3))
        u[1, 0] = 1.0
        # the m = 0 vector is in the kernel of D3 at l = 1
        self.assertEqual(0.0, hs_norm(apply(fields, (2,), [u])[0]))


if __name__ == '__main__':
    unittest.main()
