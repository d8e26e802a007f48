# tests/unit/architectures/test_devices.py
import unittest

import numpy as np

from src.architectures import PHASE_SHIFTER, TTD, PhaseDevice, phase_response, phase_responses, quantize_delays
from src.utils.exceptions import InvalidArgumentError


class TestPhaseResponse(unittest.TestCase):

    def test_ttd_half_period(self):
        # 5 ps at 100 GHz is half a period
        device = PhaseDevice(TTD, 5e-12)
        self.assertAlmostEqual(phase_response(device, 1e11), -1.0, places=12)

    def test_zero_phase_shifter(self):
        device = PhaseDevice(PHASE_SHIFTER, 0.0)
        for f in (1e11, 3e11, 1e12):
            self.assertEqual(phase_response(device, f), 1.0)

    def test_matched_devices(self):
        f_c = 3e11
        tau = 1.3e-12
        ttd = PhaseDevice(TTD, tau)
        ps = PhaseDevice(PHASE_SHIFTER, -2 * np.pi * f_c * tau)

        self.assertAlmostEqual(phase_response(ps, f_c), phase_response(ttd, f_c), places=12)
        self.assertGreater(abs(phase_response(ps, 1.2 * f_c) - phase_response(ttd, 1.2 * f_c)), 1e-3)

    def test_unit_magnitude(self):
        settings = np.linspace(0.0, 1e-11, 7)
        for f in (2.85e11, 3.15e11):
            np.testing.assert_allclose(np.abs(phase_responses(TTD, settings, f)), 1.0, atol=1e-12)
            np.testing.assert_allclose(np.abs(phase_responses(PHASE_SHIFTER, settings * 1e12, f)), 1.0, atol=1e-12)

    def test_invalid_settings(self):
        with self.assertRaises(InvalidArgumentError):
            PhaseDevice(TTD, -1e-12)
        with self.assertRaises(InvalidArgumentError):
            PhaseDevice('mems', 0.0)
        with self.assertRaises(InvalidArgumentError):
            phase_response(PhaseDevice(PHASE_SHIFTER, 0.0), 0.0)


class TestQuantizeDelays(unittest.TestCase):

    def test_nearest_grid_point(self):
        quantized = quantize_delays(np.array([0.1, 0.2, 0.4, 0.9]), 2, 1.0)
        np.testing.assert_allclose(quantized, [0.0, 0.25, 0.5, 1.0])

    def test_zero_bits(self):
        np.testing.assert_allclose(quantize_delays(np.array([0.2, 0.7]), 0, 1.0), [0.0, 1.0])

    def test_grid_device(self):
        PhaseDevice(TTD, 0.5, ttd_resolution_bits=2, max_delay=1.0)
        with self.assertRaises(InvalidArgumentError):
            PhaseDevice(TTD, 0.3, ttd_resolution_bits=2, max_delay=1.0)
        with self.assertRaises(InvalidArgumentError):
            PhaseDevice(TTD, 0.5, ttd_resolution_bits=2)

    def test_invalid_quantizer(self):
        with self.assertRaises(InvalidArgumentError):
            quantize_delays(np.array([0.1]), -1, 1.0)
        with self.assertRaises(InvalidArgumentError):
            quantize_delays(np.array([0.1]), 2, 0.0)
        with self.assertRaises(InvalidArgumentError):
            quantize_delays(np.array([-0.1]), 2, 1.0)


if __name__ == '__main__':
    unittest.main()
