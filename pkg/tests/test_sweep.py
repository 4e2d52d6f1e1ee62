import math
import unittest

import numpy as np

from dmchain.config import QuadratureConfig
from dmchain.error import DmchainError
from dmchain.model import T_MIN, ModelParams, channel_concurrence
from dmchain.output_format import get_row_format
from dmchain.sweep import (QUANTITIES, SweepAxis, SweepPoint, SweepSpec, evaluate, run_sweep,
    rows_to_records, rows_from_records)
from dmchain.teleport import average_fidelity_closed, output_concurrence_paper


class SweepAxisTest(unittest.TestCase):
    def test_parse(self):
        axis = SweepAxis.parse('J:-2:2:5')
        self.assertEqual(axis, SweepAxis('J', -2.0, 2.0, 5))
        np.testing.assert_array_equal(axis.values(), [-2.0, -1.0, 0.0, 1.0, 2.0])

    def test_rejects_bad_axes(self):
        for s in ('J:-2:2', 'J:a:b:3', 'J:0:1:2.5', 'K:0:1:3', 'J:0:1:1', 'J:1:0:3',
                'T:0:1:3', 'theta:0:4:3', 'C_in:0:1.5:3', 'J:0:inf:3'):
            with self.subTest(axis=s):
                with self.assertRaises(DmchainError):
                    SweepAxis.parse(s)


class SweepSpecTest(unittest.TestCase):
    def test_rejects_duplicate_axes(self):
        with self.assertRaises(DmchainError):
            SweepSpec('Tc', SweepAxis('D', 0, 1, 3), SweepAxis('D', 0, 2, 3))

    def test_rejects_theta_with_input_concurrence(self):
        with self.assertRaises(DmchainError):
            SweepSpec('fidelity', SweepAxis('theta', 0, 1, 3), SweepAxis('C_in', 0, 1, 3))
        with self.assertRaises(DmchainError):
            SweepSpec('fidelity', SweepAxis('theta', 0, 1, 3), fixed=SweepPoint(C_in=0.5))

    def test_rejects_unknown_quantity(self):
        with self.assertRaises(DmchainError):
            SweepSpec('entropy', SweepAxis('T', 0.1, 1, 3))

    def test_rejects_bad_fixed_point(self):
        with self.assertRaises(DmchainError):
            SweepSpec('Tc', SweepAxis('J', -1, 1, 3), fixed=SweepPoint(T=-1.0))

    def test_fixed_zero_temperature_is_clamped(self):
        point = SweepPoint(J=1.0, T=0.0)
        point.validate()
        self.assertEqual(point.params().T, T_MIN)
        spec = SweepSpec('channel_concurrence', SweepAxis('D', 0, 1, 2), fixed=point)
        self.assertEqual(len(run_sweep(spec)), 2)

    def test_row_major_order(self):
        spec = SweepSpec('channel_concurrence', SweepAxis('J', -1, 1, 3), SweepAxis('T', 0.5, 1.5, 2))
        self.assertEqual(spec.columns, ['J', 'T', 'channel_concurrence'])
        coords = [c for c, _ in spec.points()]
        self.assertEqual(coords, [
            (('J', -1.0), ('T', 0.5)), (('J', -1.0), ('T', 1.5)),
            (('J', 0.0), ('T', 0.5)), (('J', 0.0), ('T', 1.5)),
            (('J', 1.0), ('T', 0.5)), (('J', 1.0), ('T', 1.5)),
        ])


class RunSweepTest(unittest.TestCase):
    def test_values(self):
        spec = SweepSpec('channel_concurrence', SweepAxis('J', -2, 2, 5), SweepAxis('D', 0, 3, 4),
            fixed=SweepPoint(T=0.3))
        rows = run_sweep(spec)
        self.assertEqual(len(rows), 20)
        for row in rows:
            axes = dict(row.axes)
            self.assertEqual(row.value, channel_concurrence(ModelParams(axes['J'], axes['D'], 0.3)))

    def test_input_concurrence_axis(self):
        spec = SweepSpec('C_out_paper', SweepAxis('C_in', 0, 1, 5), fixed=SweepPoint(J=1, D=0.5, T=0.4))
        for row in run_sweep(spec):
            c = dict(row.axes)['C_in']
            self.assertEqual(row.value, output_concurrence_paper(ModelParams(1, 0.5, 0.4), c))

    def test_temperatures_missing_at_zero_coupling(self):
        for quantity in ('Tc', 'T_threshold'):
            spec = SweepSpec(quantity, SweepAxis('J', -1, 1, 3), fixed=SweepPoint(D=2.0))
            values = [row.value for row in run_sweep(spec)]
            self.assertIsNone(values[1])
            self.assertIsNotNone(values[0])
            self.assertIsNotNone(values[2])

    def test_every_quantity(self):
        point = SweepPoint(J=1.0, D=0.5, T=0.7, theta=1.0, phi=0.3)
        quad = QuadratureConfig(8, 8)
        for quantity in QUANTITIES:
            with self.subTest(quantity=quantity):
                value = evaluate(quantity, point, quad)
                self.assertTrue(value is None or math.isfinite(value))

    def test_two_point_axis_matches_direct_call(self):
        spec = SweepSpec('F_avg_closed', SweepAxis('T', 0.3, 0.6, 2), fixed=SweepPoint(J=-1.0, D=2.0))
        values = [row.value for row in run_sweep(spec)]
        self.assertEqual(values, [average_fidelity_closed(ModelParams(-1.0, 2.0, T)) for T in (0.3, 0.6)])

    def test_channel_concurrence_map(self):
        spec = SweepSpec('channel_concurrence', SweepAxis('J', -2, 2, 21), SweepAxis('D', 0, 3, 16),
            fixed=SweepPoint(T=0.5))
        rows = run_sweep(spec)
        ferro_no_dm = [r.value for r in rows if dict(r.axes)['J'] < 0 and dict(r.axes)['D'] == 0]
        self.assertEqual(len(ferro_no_dm), 10)
        self.assertTrue(all(v == 0 for v in ferro_no_dm))
        self.assertTrue(any(r.value > 0 for r in rows if dict(r.axes)['J'] < 0))

    def test_classical_region(self):
        t_star = 2 / math.log(11)
        spec = SweepSpec('F_avg_closed', SweepAxis('T', 0.05, 3, 60), fixed=SweepPoint(J=1.0, D=0.0))
        for row in run_sweep(spec):
            T = dict(row.axes)['T']
            self.assertEqual(row.value > 2 / 3, T < t_star, msg=f'T={T}')

    def test_process_pool_matches_serial(self):
        spec = SweepSpec('F_avg_closed', SweepAxis('J', -2, 2, 9), SweepAxis('T', 0.1, 2, 5))
        self.assertEqual(run_sweep(spec, workers=2), run_sweep(spec, workers=1))


class SweepOutputTest(unittest.TestCase):
    SPEC = SweepSpec('Tc', SweepAxis('J', -2, 2, 5), SweepAxis('D', 0, 3, 4))

    def test_deterministic(self):
        fmt = get_row_format('csv')
        a = fmt.emit(self.SPEC.columns, rows_to_records(self.SPEC, run_sweep(self.SPEC)))
        b = fmt.emit(self.SPEC.columns, rows_to_records(self.SPEC, run_sweep(self.SPEC)))
        self.assertEqual(a, b)

    def test_round_trip(self):
        rows = run_sweep(self.SPEC)
        for name in ('csv', 'json'):
            with self.subTest(format=name):
                fmt = get_row_format(name)
                text = fmt.emit(self.SPEC.columns, rows_to_records(self.SPEC, rows))
                columns, records = fmt.parse(text)
                self.assertEqual(columns, self.SPEC.columns)
                parsed = rows_from_records(columns, records)
                self.assertEqual(len(parsed), len(rows))
                self.assertEqual(fmt.emit(columns, rows_to_records(self.SPEC, parsed)), text)

    def test_missing_values(self):
        rows = run_sweep(self.SPEC)
        text = get_row_format('csv').emit(self.SPEC.columns, rows_to_records(self.SPEC, rows))
        lines = text.splitlines()
        self.assertEqual(lines[0], 'J,D,Tc')
        # J = 0 rows and the D = 0 ferromagnet have no critical temperature.
        self.assertIn('0,0,NA', lines)
        self.assertIn('-2,0,NA', lines)


if __name__ == '__main__':
    unittest.main()
