# tests/unit/algorithms/test_wsms.py
import unittest

import numpy as np

from src.algorithms import altmin_hybrid, fully_digital_baseline, wsms_solve
from src.architectures import FC, WSMS, connectivity
from src.channel import PLANAR, SPHERICAL, assemble_channel, build_two_path_scenario
from src.geometry import build_upa, partition_wsms, rank_optimal_separation
from src.utils.exceptions import InvalidArgumentError
from src.utils.metrics import noise_power, spectral_efficiency
from tests.unit.algorithms.fixtures import random_channel


class TestWsmsSolve(unittest.TestCase):

    def setUp(self):
        self.f_c = 3e11
        self.paths = build_two_path_scenario(100.0, 30.0)
        base = build_upa(4, 4, f_c=self.f_c)
        separation = rank_optimal_separation(base.wavelength, 100.0, 2)
        self.geom = partition_wsms(base, 2, separation)
        self.power = 1.0
        self.noise = noise_power(5e9, 1, 10.0)

    def channel(self, mode):
        return assemble_channel(self.paths, self.geom, self.geom, self.f_c, 5e9, 1, mode)

    def test_single_block_equals_fully_connected(self):
        channel = random_channel(13, 2, 8)
        wsms = wsms_solve(channel, 1, 2, self.power, 0.1)

        target = fully_digital_baseline(channel, self.power, 0.1, 2).target()
        fc = altmin_hybrid(target, connectivity(FC, 8, 2), 2)
        np.testing.assert_allclose(wsms.analog, fc.analog, atol=1e-9)
        np.testing.assert_allclose(wsms.digital, fc.digital, atol=1e-9)

    def test_block_diagonal_analog(self):
        result = wsms_solve(self.channel(SPHERICAL), 2, 4, self.power, self.noise)
        self.assertEqual(result.mask, connectivity(WSMS, 32, 4, 2))

        # Chains 0 and 2 drive subarray 0, chains 1 and 3 subarray 1
        np.testing.assert_array_equal(result.analog[16:, [0, 2]], 0)
        np.testing.assert_array_equal(result.analog[:16, [1, 3]], 0)
        self.assertEqual(len(result.residual_history), 2)

    def test_spherical_channel_carries_more_streams(self):
        spherical = self.channel(SPHERICAL)
        planar = self.channel(PLANAR)
        self.assertEqual(fully_digital_baseline(spherical, self.power, self.noise, 4).n_streams, 4)
        self.assertEqual(fully_digital_baseline(planar, self.power, self.noise, 4).n_streams, 2)

        result = wsms_solve(spherical, 2, 4, self.power, self.noise)
        self.assertEqual(result.n_streams, 4)
        self.assertGreater(spectral_efficiency(spherical, result, self.noise, self.power), 0.0)

    def test_invalid_layout(self):
        with self.assertRaises(InvalidArgumentError):
            wsms_solve(self.channel(SPHERICAL), 3, 4, self.power, self.noise)
        with self.assertRaises(InvalidArgumentError):
            wsms_solve(self.channel(SPHERICAL), 2, 4, self.power, self.noise, mask=connectivity(FC, 32, 4))


if __name__ == '__main__':
    unittest.main()
