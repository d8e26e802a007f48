# tests/unit/algorithms/fixtures.py
"""Small seeded channels shared by the solver tests."""
from dataclasses import replace

import numpy as np

from src.channel import Channel
from src.geometry import build_upa, partition_wsms


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_channel(seed: int, n_rx: int, n_tx: int, n_subcarriers: int = 1,
                   bandwidth: float = 1e9) -> Channel:
    """Rayleigh channel on a 1 GHz band, so rates are in bits/s."""
    rng = np.random.default_rng(seed)
    matrices = np.stack([random_matrix(rng, n_rx, n_tx) for _ in range(n_subcarriers)])
    return Channel.from_matrices(matrices, bandwidth=bandwidth)


def dft_dictionary(n_antennas: int, n_atoms: int) -> np.ndarray:
    """Oversampled DFT atoms, unit modulus."""
    n = np.arange(n_antennas)[:, np.newaxis]
    m = np.arange(n_atoms)[np.newaxis, :]
    return np.exp(1j * 2 * np.pi * n * m / n_atoms)


def random_wsms_channel(seed: int, n_rx: int, n_tx: int, k: int, separation: float = 0.01) -> Channel:
    """random_channel with the TX elements laid out as k widely-spaced subarrays."""
    channel = random_channel(seed, n_rx, n_tx)
    tx_geom = partition_wsms(build_upa(n_tx // k, 1), k, separation)
    return replace(channel, tx_geom=tx_geom)
