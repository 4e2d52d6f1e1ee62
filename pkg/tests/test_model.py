import math
import unittest

import numpy as np

from dmchain.config import ScanConfig
from dmchain.error import DmchainError
from dmchain.model import (T_MIN, ModelParams, hamiltonian, spectrum_closed_form,
    boltzmann_weights, thermal_state, gibbs_state, ground_state,
    channel_concurrence, critical_residual, critical_temperature)


PARAMS = [
    ModelParams(1.0, 0.0, 0.5),
    ModelParams(1.0, 0.5, 0.7),
    ModelParams(-1.0, 2.0, 0.3),
    ModelParams(-0.5, 1.0, 0.1),
    ModelParams(2.0, 3.0, 5.0),
]


class ModelParamsTest(unittest.TestCase):
    def test_clamps_small_temperature(self):
        self.assertEqual(ModelParams(1.0, 0.0, 0.0).T, T_MIN)
        self.assertEqual(ModelParams(1.0, 0.0, 1e-9).T, T_MIN)

    def test_rejects_negative_temperature(self):
        with self.assertRaises(DmchainError):
            ModelParams(1.0, 0.0, -0.1)

    def test_rejects_non_finite(self):
        with self.assertRaises(DmchainError):
            ModelParams(math.nan, 0.0, 1.0)
        with self.assertRaises(DmchainError):
            ModelParams(1.0, math.inf, 1.0)


class SpectrumTest(unittest.TestCase):
    def test_isotropic_energies(self):
        energies = {e.label: e.energy for e in spectrum_closed_form(ModelParams(1.0, 0.0))}
        self.assertEqual(energies, {'E00': 0.5, 'E11': 0.5, 'Plus': 0.5, 'Minus': -1.5})

    def test_eigenpairs(self):
        for p in PARAMS:
            h = hamiltonian(p)
            for e in spectrum_closed_form(p):
                np.testing.assert_allclose(h @ e.state, e.energy * e.state, atol=1e-12)
                self.assertAlmostEqual(np.linalg.norm(e.state), 1.0, places=14)

    def test_hamiltonian_block(self):
        h = hamiltonian(ModelParams(1.0, 2.0))
        self.assertAlmostEqual(h[1, 2], 1.0 + 2.0j, places=14)
        self.assertAlmostEqual(h[0, 0], 0.5, places=14)
        self.assertAlmostEqual(h[1, 1], -0.5, places=14)


class ThermalStateTest(unittest.TestCase):
    def test_matches_gibbs(self):
        for p in PARAMS:
            np.testing.assert_allclose(thermal_state(p).rho, gibbs_state(p), atol=1e-10)

    def test_partition_function(self):
        for p in PARAMS:
            z = sum(math.exp(-e.energy / p.T) for e in spectrum_closed_form(p))
            self.assertAlmostEqual(thermal_state(p).z / z, 1.0, places=12)

    def test_invariants(self):
        rho = thermal_state(ModelParams(1.0, 0.5, 0.7)).rho
        self.assertAlmostEqual(np.trace(rho).real, 1.0, places=14)
        np.testing.assert_allclose(rho, np.conjugate(rho).T, atol=0)
        for i, j in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]:
            self.assertEqual(rho[i, j], 0)

    def test_low_temperature_overflow(self):
        p = ModelParams(1.0, 0.0, 1e-6)
        ts = thermal_state(p)
        self.assertTrue(math.isinf(ts.z))
        self.assertAlmostEqual(ts.log_z, 1.5e6, delta=1e-3)
        self.assertAlmostEqual(ts.rho[1, 1].real, 0.5, places=14)
        self.assertAlmostEqual(ts.rho[1, 2].real, -0.5, places=14)
        self.assertTrue(np.all(np.isfinite(ts.rho)))

    def test_weights_are_shifted_only_on_overflow(self):
        self.assertEqual(boltzmann_weights(ModelParams(1.0, 0.0, 1.0)).log_shift, 0.0)
        self.assertGreater(boltzmann_weights(ModelParams(1.0, 0.0, 1e-3)).log_shift, 700)

    def test_approaches_ground_state(self):
        for J, D in [(1.0, 0.5), (-1.0, 1.0)]:
            np.testing.assert_allclose(thermal_state(ModelParams(J, D, 0.01)).rho,
                ground_state(J, D), atol=1e-12)

    def test_degenerate_ground_state(self):
        rho = ground_state(-1.0, 0.0)
        self.assertAlmostEqual(rho[0, 0].real, 1 / 3, places=14)
        self.assertAlmostEqual(rho[3, 3].real, 1 / 3, places=14)
        self.assertAlmostEqual(np.trace(rho).real, 1.0, places=14)


class ChannelConcurrenceTest(unittest.TestCase):
    def test_singlet_limit(self):
        self.assertAlmostEqual(channel_concurrence(ModelParams(1.0, 0.0, 0.01)), 1.0, places=12)

    def test_ferromagnet_without_dm_is_separable(self):
        for T in np.linspace(0.05, 5.0, 50):
            self.assertEqual(channel_concurrence(ModelParams(-1.0, 0.0, T)), 0.0)

    def test_spot_value(self):
        self.assertAlmostEqual(channel_concurrence(ModelParams(-0.5, 1.0, 0.1)), 0.597, delta=2e-3)

    def test_vanishes_at_high_temperature(self):
        self.assertEqual(channel_concurrence(ModelParams(1.0, 0.0, 5.0)), 0.0)

    def test_dm_sign_symmetry(self):
        for J, D, T in [(1.0, 1.3, 0.4), (-1.0, 1.3, 0.2), (-0.5, 2.0, 1.0), (2.0, 0.7, 3.0)]:
            plus, minus = ModelParams(J, D, T), ModelParams(J, -D, T)
            self.assertAlmostEqual(channel_concurrence(plus), channel_concurrence(minus), places=14)
            self.assertAlmostEqual(thermal_state(plus).log_z, thermal_state(minus).log_z, places=12)
            self.assertEqual(critical_temperature(J, D), critical_temperature(J, -D))
            rho_plus, rho_minus = thermal_state(plus).rho, thermal_state(minus).rho
            np.testing.assert_allclose(rho_minus, np.conjugate(rho_plus), atol=1e-14)


class CriticalTemperatureTest(unittest.TestCase):
    def test_isotropic(self):
        self.assertAlmostEqual(critical_temperature(1.0, 0.0), 2 / math.log(3), delta=1e-6)

    def test_residual_sign(self):
        self.assertGreater(critical_residual(1.0, 0.0, 1.0), 0)
        self.assertLess(critical_residual(1.0, 0.0, 3.0), 0)

    def test_concurrence_vanishes_there(self):
        for J, D in [(1.0, 1.0), (-1.0, 2.0), (2.0, 0.5)]:
            tc = critical_temperature(J, D)
            self.assertIsNotNone(tc)
            self.assertGreater(channel_concurrence(ModelParams(J, D, tc * 0.999)), 0)
            self.assertEqual(channel_concurrence(ModelParams(J, D, tc * 1.001)), 0)

    def test_monotone_vanishing(self):
        for D in (0.0, 1.0):
            tc = critical_temperature(1.0, D)
            ts = np.linspace(0.21 * tc, 2.0 * tc, 100)
            values = [channel_concurrence(ModelParams(1.0, D, T)) for T in ts]
            for T, c in zip(ts, values):
                if T < tc:
                    self.assertGreater(c, 0, msg=repr(T))
                else:
                    self.assertEqual(c, 0, msg=repr(T))
            self.assertTrue(all(a >= b for a, b in zip(values, values[1:])))

    def test_grows_with_dm(self):
        self.assertGreater(critical_temperature(1.0, 1.0), critical_temperature(1.0, 0.0))

    def test_none_for_plain_ferromagnet(self):
        self.assertIsNone(critical_temperature(-1.0, 0.0))

    def test_undefined_for_zero_coupling(self):
        with self.assertRaisesRegex(DmchainError, 'J = 0'):
            critical_temperature(0.0, 1.0)

    def test_scan_config(self):
        tc = critical_temperature(1.0, 0.0, ScanConfig(points=50, xtol=1e-12))
        self.assertAlmostEqual(tc, 2 / math.log(3), delta=1e-10)


if __name__ == '__main__':
    unittest.main()
