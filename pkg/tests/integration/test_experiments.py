# tests/integration/test_experiments.py
import json
import os
import shutil
import tempfile
import unittest

import numpy as np
from pandas.testing import assert_frame_equal

from src.config import load_config
from src.experiments import EXPERIMENTS, SweepResult

SMALL_SCENARIO = {
    'geometry': {'n_x': 4, 'n_y': 4},
    'rate_vs_power': {'power_dbm': [10.0, 20.0], 'n_rf': 2, 'wsms_subarrays': 2, 'check_ordering': False},
    'daosa_tradeoff': {'n_rf': 2, 'n_subarrays': 2},
    'wsms_subarrays': {'k_values': [1, 2], 'n_rf': 4},
    'array_gain': {'n_subcarriers': 9},
    'ttd_resolution': {'bits': [2, 6], 'n_subcarriers': 9},
    'squint_vs_bandwidth': {'fractional_bandwidths': [0.01, 0.1], 'n_subcarriers': 9},
    'algorithm': {'dictionary_azimuth': 16, 'dictionary_elevation': 4, 'max_iter': 50},
}


class TestExperiments(unittest.TestCase):
    """Every sweep end to end on a 16-antenna scene."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_path = os.path.join(self.temp_dir, 'config.json')
        with open(self.config_path, 'w') as f:
            json.dump(SMALL_SCENARIO, f)

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def run_sweep(self, command, *overrides):
        return EXPERIMENTS[command](load_config(self.config_path, list(overrides)))

    def test_rate_vs_power(self):
        result = self.run_sweep('rate-vs-power')
        self.assertEqual(result.flagged_count, 0)
        frame = result.to_frame()
        self.assertEqual(len(frame), 6)

        # Hybrid rates never beat the fully-digital bound
        self.assertTrue(np.all(frame['rate'] <= frame['fully_digital_rate'] * (1 + 1e-9)))
        for architecture in ('fc', 'aosa', 'wsms'):
            rates = frame[frame['architecture'] == architecture]['rate'].to_numpy()
            self.assertGreater(rates[1], rates[0])

        # FC draws more power than AoSA at equal chain count
        power = frame.groupby('architecture')['power'].first()
        self.assertGreater(power['fc'], power['aosa'])

    def test_rate_vs_power_omp(self):
        result = self.run_sweep('rate-vs-power', 'algorithm.fc_solver=omp', 'rate_vs_power.architectures=["fc"]')
        self.assertEqual(result.flagged_count, 0)
        self.assertEqual(len(result), 2)

    def test_daosa_tradeoff(self):
        result = self.run_sweep('daosa-tradeoff')
        self.assertEqual(result.flagged_count, 0)
        frame = result.to_frame()
        self.assertEqual(list(frame['closed_switches']), [2, 3, 4])
        self.assertEqual(list(frame['architecture']), ['aosa', 'daosa', 'fc'])
        self.assertTrue(np.all(np.diff(frame['power']) > 0))

    def test_array_gain(self):
        result = self.run_sweep('array-gain')
        self.assertEqual(result.units['ps_gain_db'], 'dB (amplitude)')
        self.assertEqual(self.run_sweep('array-gain', 'array_gain.convention=power').units['ttd_gain_db'],
                         'dB (power)')
        frame = result.to_frame()
        self.assertEqual(len(frame), 9)
        np.testing.assert_allclose(frame['ttd_gain_db'], 0.0, atol=1e-9)
        self.assertAlmostEqual(frame['ps_gain_db'][4], 0.0, places=9)
        self.assertTrue(np.all(frame['ps_gain_db'] <= 1e-9))

    def test_ttd_resolution(self):
        frame = self.run_sweep('ttd-resolution').to_frame()
        self.assertEqual(list(frame['bits']), [2, 6])
        self.assertFalse(frame['flagged'].any())
        self.assertTrue(np.all(frame['ttd_worst_loss_db'] >= -1e-9))

    def test_squint_vs_bandwidth(self):
        frame = self.run_sweep('squint-vs-bandwidth').to_frame()
        self.assertEqual(len(frame), 2)
        narrow, wide = frame['ps_worst_loss_db']
        self.assertLess(narrow, wide)
        self.assertTrue(np.all(frame['ps_best_grid_loss_db'] <= frame['ps_worst_loss_db'] + 1e-9))
        np.testing.assert_allclose(frame['ttd_worst_loss_db'], 0.0, atol=1e-9)

    def test_wsms_subarrays(self):
        frame = self.run_sweep('wsms-subarrays').to_frame()
        self.assertEqual(list(frame['k_subarrays']), [1, 2])
        self.assertFalse(frame['flagged'].any())
        self.assertGreaterEqual(frame['channel_rank'][1], frame['channel_rank'][0])

    def test_wsms_bad_layout_flagged(self):
        result = self.run_sweep('wsms-subarrays', 'wsms_subarrays.k_values=[3]')
        self.assertEqual(result.flagged_count, 1)

    def test_results_written(self):
        result = self.run_sweep('rayleigh')
        path = result.to_csv(os.path.join(self.temp_dir, 'rayleigh.csv'))
        self.assertEqual(len(SweepResult.read_csv(path)), 3)
        self.assertEqual(SweepResult.read_metadata(path)['command'], 'rayleigh')

    def test_same_config_same_rows(self):
        for command in ('rate-vs-power', 'daosa-tradeoff', 'wsms-subarrays'):
            first = self.run_sweep(command).to_frame()
            second = self.run_sweep(command).to_frame()
            assert_frame_equal(first, second, check_exact=True)


class TestReferenceScenario(unittest.TestCase):
    """The shipped 32x32, 0.3 THz, 100 m scene."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_path = os.path.join(self.temp_dir, 'config.json')
        with open(self.config_path, 'w') as f:
            json.dump({}, f)

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def run_sweep(self, command, *overrides):
        return EXPERIMENTS[command](load_config(self.config_path, list(overrides)))

    def test_rate_ordering_at_endpoints(self):
        result = self.run_sweep('rate-vs-power', 'rate_vs_power.power_dbm=[0, 20, 30]')
        self.assertEqual(result.flagged_count, 0)
        frame = result.to_frame()
        rates = frame.pivot(index='transmit_power_dbm', columns='architecture', values='rate')

        for p_dbm in (0.0, 20.0, 30.0):
            self.assertGreater(rates.loc[p_dbm, 'wsms'], rates.loc[p_dbm, 'fc'])
            self.assertGreater(rates.loc[p_dbm, 'fc'], rates.loc[p_dbm, 'aosa'])

        # WSMS leads FC by about 40 Gbps and AoSA by about 60 Gbps at 20 dBm
        self.assertAlmostEqual((rates.loc[20.0, 'wsms'] - rates.loc[20.0, 'fc']) / 1e9, 40.0, delta=20.0)
        self.assertAlmostEqual((rates.loc[20.0, 'wsms'] - rates.loc[20.0, 'aosa']) / 1e9, 60.0, delta=30.0)

    def test_daosa_trace_never_loses_rate(self):
        result = self.run_sweep('daosa-tradeoff')
        self.assertEqual(result.flagged_count, 0)
        frame = result.to_frame()
        self.assertEqual(list(frame['closed_switches']), list(range(4, 17)))

        rates = frame['rate'].to_numpy()
        for before, after in zip(rates, rates[1:]):
            self.assertGreaterEqual(after, before - 1e-9)


if __name__ == '__main__':
    unittest.main()
