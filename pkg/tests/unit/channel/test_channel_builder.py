# tests/unit/channel/test_channel_builder.py
import unittest
from dataclasses import replace

import numpy as np

from src.channel import (
    ELEMENT,
    PLANAR,
    SPHERICAL,
    Channel,
    PathSet,
    assemble_channel,
    build_two_path_scenario,
    friis_path_loss_db,
    numerical_rank,
    subcarrier_grid,
)
from src.geometry import build_upa, partition_wsms, rank_optimal_separation, steering_vector
from src.utils.exceptions import InvalidArgumentError


class TestSubcarrierGrid(unittest.TestCase):

    def test_narrowband(self):
        np.testing.assert_array_equal(subcarrier_grid(3e11, 0.0, 1), [3e11])

        # A single subcarrier sits on the carrier whatever the bandwidth
        np.testing.assert_array_equal(subcarrier_grid(3e11, 5e9, 1), [3e11])

    def test_grid_includes_band_edges(self):
        grid = subcarrier_grid(3e11, 2e9, 3)
        np.testing.assert_allclose(grid, [2.99e11, 3e11, 3.01e11])

        grid = subcarrier_grid(3e11, 3e10, 30)
        self.assertEqual(grid.size, 30)
        self.assertAlmostEqual(grid[0], 2.85e11)
        self.assertAlmostEqual(grid[-1], 3.15e11)

    def test_invalid_grid(self):
        with self.assertRaises(InvalidArgumentError):
            subcarrier_grid(3e11, 0.0, 2)
        with self.assertRaises(InvalidArgumentError):
            subcarrier_grid(3e11, -1.0, 1)
        with self.assertRaises(InvalidArgumentError):
            subcarrier_grid(3e11, 1e9, 0)


class TestNumericalRank(unittest.TestCase):

    def test_identity(self):
        self.assertEqual(numerical_rank(np.eye(3), 0.5), 3)

    def test_outer_product(self):
        a = np.array([1.0, 2.0, 3.0]) + 1j
        b = np.array([1.0, -1.0, 0.5, 2.0])
        self.assertEqual(numerical_rank(np.outer(a, b.conj())), 1)

    def test_zero_matrix(self):
        self.assertEqual(numerical_rank(np.zeros((3, 3))), 0)

    def test_invalid_input(self):
        with self.assertRaises(InvalidArgumentError):
            numerical_rank(np.zeros((0, 3)))
        with self.assertRaises(InvalidArgumentError):
            numerical_rank(np.eye(2), 1.5)


class TestAssembleChannel(unittest.TestCase):

    def setUp(self):
        self.f_c = 3e11
        self.paths = build_two_path_scenario(100.0, 30.0)
        self.los_only = PathSet(self.paths.paths[:1], rx_offset=self.paths.rx_offset)

    def test_single_element_los(self):
        one = build_upa(1, 1)
        channel = assemble_channel(self.los_only, one, one, self.f_c, 0.0, 1)
        self.assertEqual(channel.matrices.shape, (1, 1, 1))

        expected = 10 ** (-friis_path_loss_db(100.0, self.f_c) / 20)
        self.assertTrue(np.isclose(abs(channel[0][0, 0]), expected, rtol=1e-9))
        self.assertAlmostEqual(abs(channel[0][0, 0]), 7.96e-7, delta=0.02e-7)

    def test_planar_rank_equals_path_count(self):
        geom = build_upa(8, 8)
        channel = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, PLANAR)
        self.assertEqual(channel.rank(1e-3), 2)

        # Blocking the LoS path leaves a rank-1 channel
        blocked = assemble_channel(self.paths.without_los(), geom, geom, self.f_c, 0.0, 1, PLANAR)
        self.assertEqual(blocked.rank(1e-3), 1)

    def test_widely_spaced_subarrays_raise_rank(self):
        base = build_upa(4, 4)
        separation = rank_optimal_separation(base.wavelength, 100.0, 2)
        geom = partition_wsms(base, 2, separation)

        planar = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, PLANAR)
        spherical = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, SPHERICAL)
        self.assertLessEqual(planar.rank(1e-3), 2)
        self.assertEqual(spherical.rank(1e-3), 4)

    def test_spherical_converges_to_planar(self):
        base = build_upa(2, 2)

        def relative_error(separation):
            geom = partition_wsms(base, 2, separation)
            planar = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, PLANAR)
            spherical = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, SPHERICAL)
            return (np.linalg.norm(spherical.matrices - planar.matrices)
                    / np.linalg.norm(planar.matrices))

        close = relative_error(0.01)
        wide = relative_error(0.2236)
        self.assertLess(close, 0.05)
        self.assertLess(close, wide)

    def test_element_granularity_on_small_arrays(self):
        geom = build_upa(2, 2)
        planar = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, PLANAR)
        exact = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, SPHERICAL, ELEMENT)
        error = np.linalg.norm(exact.matrices - planar.matrices) / np.linalg.norm(planar.matrices)
        self.assertLess(error, 1e-3)

    def test_extra_loss_scales_contribution(self):
        geom = build_upa(4, 4)
        louder = assemble_channel(self.los_only, geom, geom, self.f_c, 0.0, 1)
        attenuated = PathSet((replace(self.los_only.paths[0], extra_loss_db=15.0),),
                             rx_offset=self.paths.rx_offset)
        quieter = assemble_channel(attenuated, geom, geom, self.f_c, 0.0, 1)
        ratio = np.linalg.norm(louder.matrices) / np.linalg.norm(quieter.matrices)
        self.assertAlmostEqual(ratio, 10 ** (15 / 20), places=9)

    def test_narrowband_matches_ray_sum(self):
        geom = build_upa(2, 2)
        channel = assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, PLANAR)
        expected = sum(
            p.amplitude(self.f_c) * np.exp(-2j * np.pi * self.f_c * p.delay)
            * np.outer(steering_vector(geom, p.arrival, self.f_c),
                       steering_vector(geom, p.departure, self.f_c).conj())
            for p in self.paths
        )
        np.testing.assert_allclose(channel[0], expected, rtol=1e-12, atol=0)

    def test_wideband_shape(self):
        geom = build_upa(2, 2)
        channel = assemble_channel(self.paths, geom, geom, self.f_c, 5e9, 4)
        self.assertEqual(channel.n_subcarriers, 4)
        self.assertEqual((channel.n_rx, channel.n_tx), (4, 4))
        self.assertAlmostEqual(channel.center_frequency, self.f_c)

    def test_invalid_mode(self):
        geom = build_upa(2, 2)
        with self.assertRaises(InvalidArgumentError):
            assemble_channel(self.paths, geom, geom, self.f_c, 0.0, 1, 'curved')


class TestChannel(unittest.TestCase):

    def test_from_matrices(self):
        channel = Channel.from_matrices(np.eye(2))
        self.assertEqual(channel.matrices.shape, (1, 2, 2))
        self.assertEqual(channel.rank(), 2)

        doubled = channel.scaled(2.0)
        np.testing.assert_allclose(doubled[0], 2 * np.eye(2))

    def test_shape_mismatch(self):
        geom = build_upa(2, 1)
        with self.assertRaises(InvalidArgumentError):
            Channel(np.array([3e11]), np.zeros((1, 3, 2)), geom, geom)

    def test_bandwidth_must_cover_grid(self):
        geom = build_upa(1, 1)
        with self.assertRaises(InvalidArgumentError):
            Channel(np.array([1e11, 2e11]), np.zeros((2, 1, 1)), geom, geom, bandwidth=1e9)


if __name__ == '__main__':
    unittest.main()
