# tests/unit/algorithms/test_omp.py
import unittest
from itertools import combinations

import numpy as np

from src.algorithms import build_dictionary, dictionary_directions, least_squares_digital, omp_hybrid
from src.architectures import AOSA, FC, connectivity
from src.geometry import build_upa
from src.utils.exceptions import InvalidArgumentError
from tests.unit.algorithms.fixtures import dft_dictionary, random_matrix


def projection_residual(atoms: np.ndarray, target: np.ndarray) -> float:
    digital = least_squares_digital(atoms, target[np.newaxis])
    return float(np.linalg.norm(target - atoms @ digital[0]))


class TestOmpHybrid(unittest.TestCase):

    def setUp(self):
        self.dictionary = dft_dictionary(4, 8)
        self.mask = connectivity(FC, 4, 2)

    def test_exact_recovery(self):
        # Bins 0 and 4 of the 8-point grid are orthogonal on 4 antennas
        target = self.dictionary[:, [0, 4]] @ np.array([[1.0, 0.3j], [0.2, -0.6]])
        result = omp_hybrid(target, self.dictionary, self.mask, 2)
        self.assertLess(result.residual_history[-1], 1e-9)

    def test_residual_non_increasing(self):
        target = random_matrix(np.random.default_rng(1), 4, 2)
        result = omp_hybrid(target, self.dictionary, self.mask, 2)
        history = np.array(result.residual_history)
        self.assertEqual(history.size, 3)
        self.assertTrue(np.all(np.diff(history) <= 1e-12))

    def test_full_dictionary(self):
        atoms = self.dictionary[:, :3]
        target = random_matrix(np.random.default_rng(2), 4, 2)
        result = omp_hybrid(target, atoms, connectivity(FC, 4, 3), 3)
        self.assertAlmostEqual(result.residual_history[-1], projection_residual(atoms, target), places=9)

    def test_close_to_exhaustive_search(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            coefficients = random_matrix(rng, 2, 2)
            # the stronger atom leads
            coefficients[0] /= np.linalg.norm(coefficients[0])
            coefficients[1] *= 0.5 / np.linalg.norm(coefficients[1])
            target = self.dictionary[:, [0, 4]] @ coefficients + 0.01 * random_matrix(rng, 4, 2)

            best = min(projection_residual(self.dictionary[:, list(pair)], target)
                       for pair in combinations(range(8), 2))
            result = omp_hybrid(target, self.dictionary, self.mask, 2)
            self.assertLessEqual(result.residual_history[-1], 1.05 * best + 1e-12)

    def test_validation(self):
        target = random_matrix(np.random.default_rng(3), 4, 2)
        with self.assertRaises(InvalidArgumentError):
            omp_hybrid(target, self.dictionary[:, :1], self.mask, 2)
        with self.assertRaises(InvalidArgumentError):
            omp_hybrid(target, 2 * self.dictionary, self.mask, 2)
        with self.assertRaises(InvalidArgumentError):
            omp_hybrid(target, self.dictionary, connectivity(AOSA, 4, 2, 2), 2)


class TestDictionary(unittest.TestCase):

    def test_grid(self):
        directions = dictionary_directions(8, 3)
        self.assertEqual(len(directions), 24)
        self.assertAlmostEqual(directions[0].azimuth, -np.pi)
        self.assertAlmostEqual(directions[-1].elevation, np.pi / 2)

    def test_atoms_are_steering_vectors(self):
        atoms = build_dictionary(build_upa(2, 2), 3e11, 4, 2)
        self.assertEqual(atoms.shape, (4, 8))
        np.testing.assert_allclose(np.abs(atoms), 1.0, atol=1e-12)


if __name__ == '__main__':
    unittest.main()
