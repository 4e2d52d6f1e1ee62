import io
import unittest

from dmchain.config import VerifyConfig
from dmchain.error import DmchainError
from dmchain.util import StatusPrinter
from dmchain.verify import REPORT_COLUMNS, parameter_grid, run_verify


class VerifyTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.log = io.StringIO()
        cls.report = run_verify(grid_density=5, printer=StatusPrinter(stream=cls.log))

    def test_all_checks_pass(self):
        failed = [(r.name, r.max_error, r.note) for r in self.report.results if r.status == 'FAIL']
        self.assertEqual(failed, [])
        self.assertTrue(self.report.passed)

    def test_deviations_are_reported(self):
        for name in ('output_concurrence_printed_formula', 'printed_formula_low_temperature'):
            r = self.report.result(name)
            self.assertEqual(r.kind, 'deviation')
            self.assertEqual(r.status, 'deviation')
        self.assertGreater(self.report.result('printed_formula_low_temperature').max_error, 0.4)

    def test_oracle_checks_cover_the_grid(self):
        r = self.report.result('thermal_state_gibbs')
        self.assertEqual(r.points, 100)
        self.assertEqual(self.report.result('output_concurrence_zero_region').points, 200)

    def test_records(self):
        records = self.report.records()
        self.assertEqual(len(records), len(self.report.results))
        for rec in records:
            self.assertEqual(list(rec), REPORT_COLUMNS)

    def test_progress_log(self):
        log = self.log.getvalue()
        self.assertIn(' ** critical_temperature_isotropic', log)
        self.assertIn('verify: 100 grid points', log)

    def test_unknown_result(self):
        with self.assertRaises(KeyError):
            self.report.result('no_such_check')


class ParameterGridTest(unittest.TestCase):
    def test_skips_zero_coupling(self):
        grid = parameter_grid(VerifyConfig(), 5)
        self.assertEqual(len(grid), 4 * 5 * 5)
        self.assertTrue(all(p.J != 0 for p in grid))

    def test_rejects_coarse_grid(self):
        with self.assertRaises(DmchainError):
            run_verify(grid_density=4)


if __name__ == '__main__':
    unittest.main()
