import math
import unittest

import numpy as np

from dmchain.concurrence import (DensityMatrix, check_density_matrix, is_x_state,
    wootters_lambdas, wootters_concurrence, wootters_concurrence_max_form,
    xstate_margin, xstate_concurrence, pure_input_concurrence)
from dmchain.config import VerifyConfig
from dmchain.error import DmchainError
from dmchain.linalg import kron
from dmchain.model import ModelParams, channel_concurrence, thermal_state
from dmchain.teleport import PSI_MINUS, PHI_PLUS
from dmchain.verify import parameter_grid


def projector(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, np.conjugate(v))

def werner(p):
    return p * projector(PSI_MINUS) + (1 - p) * np.eye(4) / 4

def random_unitary(rng):
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


class WoottersTest(unittest.TestCase):
    def test_bell_states(self):
        for v in (PSI_MINUS, PHI_PLUS):
            self.assertAlmostEqual(wootters_concurrence(projector(v)), 1.0, places=12)

    def test_product_state(self):
        self.assertAlmostEqual(wootters_concurrence(projector([0, 1, 0, 0])), 0.0, places=12)
        self.assertAlmostEqual(wootters_concurrence(np.eye(4) / 4), 0.0, places=12)

    def test_pure_state_formula(self):
        # For a pure state, C = 2 |v_11 v_00 - v_10 v_01|.
        v = np.array([0.3, 0.5j, -0.2, 0.6 + 0.1j])
        v = v / np.linalg.norm(v)
        expected = 2 * abs(v[0] * v[3] - v[1] * v[2])
        self.assertAlmostEqual(wootters_concurrence(projector(v)), expected, places=10)
        self.assertAlmostEqual(wootters_concurrence_max_form(projector(v)), expected, places=10)

    def test_werner_states(self):
        for p in (0.2, 1 / 3, 0.5, 0.8, 1.0):
            expected = max(0.0, (3 * p - 1) / 2)
            self.assertAlmostEqual(wootters_concurrence(werner(p)), expected, places=10)
            self.assertAlmostEqual(xstate_concurrence(werner(p)), expected, places=12)

    def test_lambdas_descending(self):
        lam = wootters_lambdas(werner(0.8))
        self.assertEqual(len(lam), 4)
        self.assertTrue(all(lam[k] >= lam[k + 1] for k in range(3)))

    def test_thermal_state_agrees_with_x_formula(self):
        for p in (ModelParams(1.0, 0.5, 0.7), ModelParams(-0.5, 1.0, 0.1), ModelParams(2.0, 0.0, 3.0)):
            rho = thermal_state(p).rho
            self.assertAlmostEqual(wootters_concurrence(rho), xstate_concurrence(rho), places=10)

    def test_thermal_states_over_parameter_grid(self):
        points = parameter_grid(VerifyConfig(), 10) + [ModelParams(1.0, 0.0, 2.525)]
        for p in points:
            rho = thermal_state(p).rho
            self.assertAlmostEqual(wootters_concurrence(rho), channel_concurrence(p), delta=1e-10,
                msg=repr(p))

    def test_random_states_in_unit_interval(self):
        rng = np.random.default_rng(31)
        for k in range(1000):
            rank = 1 + k % 4
            a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
            rho = a @ np.conjugate(a).T
            c = wootters_concurrence(rho / np.trace(rho).real)
            self.assertGreaterEqual(c, 0.0)
            self.assertLessEqual(c, 1.0 + 1e-12)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(37)
        for k in range(100):
            rank = 1 + k % 2
            a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
            rho = a @ np.conjugate(a).T
            rho = rho / np.trace(rho).real
            u = kron(random_unitary(rng), random_unitary(rng))
            moved = u @ rho @ np.conjugate(u).T
            self.assertAlmostEqual(wootters_concurrence(moved), wootters_concurrence(rho), delta=1e-9)

    def test_rejects_negative_eigenvalue(self):
        with self.assertRaises(DmchainError):
            wootters_lambdas(np.diag([1.5, -0.5, 0.0, 0.0]))


class XStateTest(unittest.TestCase):
    def test_detects_x_states(self):
        self.assertTrue(is_x_state(thermal_state(ModelParams(1.0, 1.0, 1.0)).rho))
        self.assertTrue(is_x_state(werner(0.5)))
        self.assertFalse(is_x_state(projector([1, 1, 0, 0])))

    def test_margin_sign(self):
        self.assertGreater(xstate_margin(werner(0.8)), 0)
        self.assertLess(xstate_margin(werner(0.2)), 0)
        self.assertAlmostEqual(xstate_margin(werner(0.2)), (3 * 0.2 - 1) / 2, places=12)

    def test_margin_rejects_non_x_state(self):
        with self.assertRaises(DmchainError):
            xstate_margin(projector([1, 1, 0, 0]))


class DensityMatrixTest(unittest.TestCase):
    def test_accepts_valid_state(self):
        d = DensityMatrix(werner(0.5))
        self.assertIs(check_density_matrix(d), d.rho)

    def test_rejects_wrong_shape(self):
        with self.assertRaises(DmchainError):
            check_density_matrix(np.eye(2) / 2)

    def test_rejects_bad_trace(self):
        with self.assertRaises(DmchainError):
            DensityMatrix(np.eye(4))

    def test_rejects_non_hermitian(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 1] = 0.1
        with self.assertRaises(DmchainError):
            check_density_matrix(rho)

    def test_rejects_nan(self):
        rho = np.eye(4) / 4
        rho[0, 0] = math.nan
        with self.assertRaises(DmchainError):
            check_density_matrix(rho)


class PureInputConcurrenceTest(unittest.TestCase):
    def test_values(self):
        self.assertAlmostEqual(pure_input_concurrence(math.pi / 2), 1.0, places=15)
        self.assertEqual(pure_input_concurrence(0.0), 0.0)
        self.assertAlmostEqual(pure_input_concurrence(math.pi / 6, 1.0), 0.5, places=15)
        self.assertAlmostEqual(pure_input_concurrence(5 * math.pi / 6), 0.5, places=15)


if __name__ == '__main__':
    unittest.main()
