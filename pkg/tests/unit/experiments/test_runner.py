# tests/unit/experiments/test_runner.py
import json
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from src.architectures import WSMS
from src.config import load_config
from src.experiments import run_power_budget, run_rate_vs_power, run_rayleigh
from src.experiments.runner import (
    build_arrays,
    build_paths,
    link_budget,
    ordering_violations,
    switches_with_closed,
)
from src.utils.exceptions import InvalidArgumentError


class RunnerTestCase(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_path = os.path.join(self.temp_dir, 'config.json')
        with open(self.config_path, 'w') as f:
            json.dump({}, f)

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def scenario(self, *overrides):
        return load_config(self.config_path, list(overrides))


class TestSceneHelpers(RunnerTestCase):

    def test_two_path_scene(self):
        paths = build_paths(self.scenario())
        self.assertEqual(len(paths.paths), 2)
        self.assertTrue(paths.has_los)

    def test_single_path_and_blocked(self):
        self.assertEqual(len(build_paths(self.scenario('channel.n_paths=1')).paths), 1)
        blocked = build_paths(self.scenario('channel.blocked_los=true'))
        self.assertFalse(blocked.has_los)
        self.assertEqual(len(blocked.paths), 1)

    def test_wsms_keeps_antenna_count(self):
        tx, rx = build_arrays(self.scenario('geometry.n_x=8', 'geometry.n_y=4'), WSMS, 2)
        self.assertEqual(tx.n_elements, 32)
        self.assertEqual(tx.n_subarrays, 2)
        self.assertIs(tx, rx)

        with self.assertRaises(InvalidArgumentError):
            build_arrays(self.scenario('geometry.n_x=8'), WSMS, 3)

    def test_wsms_default_separation(self):
        # sqrt(lambda D / k) at 0.3 THz, 100 m, k = 2
        tx, _ = build_arrays(self.scenario(), WSMS, 2)
        centers = tx.subarray_centers()
        self.assertAlmostEqual(float(np.linalg.norm(centers[1] - centers[0])), 0.2235, places=3)

        tx, _ = build_arrays(self.scenario('geometry.wsms_separation=0.316'), WSMS, 2)
        centers = tx.subarray_centers()
        self.assertAlmostEqual(float(np.linalg.norm(centers[1] - centers[0])), 0.316, places=9)

    def test_link_budget(self):
        total, noise = link_budget(self.scenario(), 30.0)
        self.assertAlmostEqual(total, 1.0)
        # -174 dBm/Hz, 0 dB noise figure, 5 GHz
        self.assertAlmostEqual(noise / (10 ** (-20.4) * 5e9), 1.0, places=9)


class TestSwitchesWithClosed(unittest.TestCase):

    def test_round_robin_then_row_major(self):
        switches = switches_with_closed(2, 2, 3)
        np.testing.assert_array_equal(switches.closed, [[True, True], [False, True]])

    def test_endpoints(self):
        self.assertEqual(switches_with_closed(4, 4, 4).closed_count, 4)
        self.assertTrue(np.all(switches_with_closed(4, 4, 16).closed))

    def test_fewer_chains_than_subarrays(self):
        switches = switches_with_closed(1, 2, 1)
        np.testing.assert_array_equal(switches.closed, [[True, False]])

    def test_out_of_range(self):
        with self.assertRaises(InvalidArgumentError):
            switches_with_closed(4, 4, 3)
        with self.assertRaises(InvalidArgumentError):
            switches_with_closed(4, 4, 17)


class TestRateOrdering(RunnerTestCase):

    SMALL = ('geometry.n_x=4', 'geometry.n_y=4', 'rate_vs_power.power_dbm=[10]', 'rate_vs_power.n_rf=2')

    def test_ordering_violations(self):
        self.assertEqual(ordering_violations({'wsms': 3.0, 'fc': 2.0, 'aosa': 1.0}), [])
        self.assertEqual(ordering_violations({'wsms': 2.0, 'fc': 2.0, 'aosa': 1.0}), [('wsms', 'fc')])
        self.assertEqual(ordering_violations({'wsms': 1.0, 'fc': 2.0, 'aosa': 3.0}),
                         [('wsms', 'fc'), ('fc', 'aosa')])
        self.assertEqual(ordering_violations({'fc': 1.0, 'aosa': 1.0}), [('fc', 'aosa')])
        self.assertEqual(ordering_violations({'wsms': 1.0}), [])

    @staticmethod
    def fixed_point(config, channel, architecture, n_rf, n_subarrays, transmit_power_dbm):
        rate = {'wsms': 1e9, 'fc': 2e9, 'aosa': 5e8}[architecture]
        return {'rate': rate, 'spectral_efficiency': rate / 5e9, 'n_streams': 1,
                'fully_digital_rate': 3e9, 'power': 1.0, 'energy_efficiency': rate}

    def test_broken_ordering_flagged(self):
        with patch('src.experiments.runner._hybrid_point', side_effect=self.fixed_point):
            result = run_rate_vs_power(self.scenario(*self.SMALL))
        frame = result.to_frame().set_index('architecture')

        self.assertEqual(result.flagged_count, 2)
        self.assertTrue(frame.loc['wsms', 'flagged'])
        self.assertTrue(frame.loc['fc', 'flagged'])
        self.assertFalse(frame.loc['aosa', 'flagged'])
        # flagged rows keep their values
        self.assertEqual(frame.loc['wsms', 'rate'], 1e9)
        self.assertIn('does not exceed', frame.loc['fc', 'message'])

    def test_ordering_check_disabled(self):
        with patch('src.experiments.runner._hybrid_point', side_effect=self.fixed_point):
            result = run_rate_vs_power(self.scenario(*self.SMALL, 'rate_vs_power.check_ordering=false'))
        self.assertEqual(result.flagged_count, 0)
        self.assertEqual(len(result), 3)


class TestClosedFormSweeps(RunnerTestCase):

    def test_rayleigh_distances(self):
        frame = run_rayleigh(self.scenario()).to_frame()
        np.testing.assert_allclose(frame['rayleigh_distance'], [0.4002, 4.002, 66.71], rtol=1e-3)

    def test_power_budget(self):
        result = run_power_budget(self.scenario())
        self.assertEqual(result.flagged_count, 0)
        frame = result.to_frame()

        power = dict(zip(zip(frame['architecture'], frame['closed_switches'].fillna(0)), frame['power']))
        self.assertAlmostEqual(power[('fc', 0)], 234.572, places=6)
        self.assertAlmostEqual(power[('aosa', 0)], 105.548, places=6)
        self.assertGreater(power[('daosa', 16)], power[('daosa', 4)])
        self.assertGreaterEqual(power[('daosa', 4)], power[('aosa', 0)])

        fc = frame[frame['architecture'] == 'fc'].iloc[0]
        self.assertEqual(fc['phase_devices_active'], 4096)

    def test_power_budget_flags_bad_count(self):
        result = run_power_budget(self.scenario('power_budget.daosa_closed_switches=[2, 8]'))
        self.assertEqual(result.flagged_count, 1)
        self.assertEqual(len(result), 5)


if __name__ == '__main__':
    unittest.main()
