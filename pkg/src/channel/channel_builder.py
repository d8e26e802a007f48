"""
Per-subcarrier MIMO channel synthesis from a PathSet.

Planar mode is the classic sparse ray sum

    H[k] = sum_l g_l(f_k) exp(-j 2 pi f_k tau_l) a_rx(arrival_l, f_k) a_tx(departure_l, f_k)^H

Spherical mode keeps the same sum and corrects every sub-path with the exact
(image-method) distance it travels. The TX array is mounted rotated by 180
degrees about the link axis, local (x, y) -> scene (-x, -y); with that mounting
the planar sum above is exactly the far-field linearization of the exact
distances, so both modes agree once the wavefront curvature vanishes.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.constants import speed_of_light
from scipy.linalg import svdvals

from ..geometry import ArrayGeometry, build_upa, steering_vector
from ..utils.exceptions import InvalidArgumentError
from .propagation import Path, PathSet

logger = logging.getLogger(__name__)

PLANAR = 'planar'
SPHERICAL = 'spherical'
PROPAGATION_MODES = (PLANAR, SPHERICAL)

SUBARRAY = 'subarray'
ELEMENT = 'element'
GRANULARITIES = (SUBARRAY, ELEMENT)

# Scene orientation of the TX array (rotation about the link axis)
TX_MOUNT = np.diag([-1.0, -1.0, 1.0])


@dataclass(frozen=True, eq=False)
class Channel:
    """
    Frequency-selective MIMO channel.

    Attributes:
        subcarrier_frequencies: (K,) strictly increasing, centered on the carrier
        matrices: (K, N_rx, N_tx) complex channel matrices
        tx_geom: Transmit array
        rx_geom: Receive array
        propagation_mode: 'planar' or 'spherical'
        bandwidth: Signal bandwidth in Hz (may exceed the grid span, e.g. K = 1)
        paths: Ray description the matrices were built from
    """
    subcarrier_frequencies: np.ndarray
    matrices: np.ndarray
    tx_geom: ArrayGeometry
    rx_geom: ArrayGeometry
    propagation_mode: str = PLANAR
    bandwidth: float = 0.0
    paths: Optional[PathSet] = field(default=None, repr=False)

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.subcarrier_frequencies, dtype=float))
        mats = np.asarray(self.matrices, dtype=complex)
        if mats.ndim == 2:
            mats = mats[np.newaxis]
        if mats.shape != (freqs.size, self.rx_geom.n_elements, self.tx_geom.n_elements):
            raise InvalidArgumentError(
                f"Channel matrices {mats.shape} do not match {freqs.size} subcarriers and "
                f"{self.rx_geom.n_elements}x{self.tx_geom.n_elements} arrays"
            )
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise InvalidArgumentError("Subcarrier frequencies must be strictly increasing")
        if self.propagation_mode not in PROPAGATION_MODES:
            raise InvalidArgumentError(f"Unknown propagation mode '{self.propagation_mode}'")
        if self.bandwidth < freqs[-1] - freqs[0]:
            raise InvalidArgumentError("Bandwidth is narrower than the subcarrier grid")
        object.__setattr__(self, 'subcarrier_frequencies', freqs)
        object.__setattr__(self, 'matrices', mats)

    @classmethod
    def from_matrices(cls, matrices: np.ndarray, f_c: float = 3e11, bandwidth: float = 0.0) -> "Channel":
        """
        Wrap raw channel matrices, with linear half-wavelength arrays as geometry.

        Args:
            matrices: (N_rx, N_tx) or (K, N_rx, N_tx) complex matrices
            f_c: Carrier frequency in Hz
            bandwidth: Bandwidth in Hz spanned by the K subcarriers

        Returns:
            Channel on the uniform subcarrier grid of (f_c, bandwidth, K)
        """
        mats = np.asarray(matrices, dtype=complex)
        if mats.ndim == 2:
            mats = mats[np.newaxis]
        if mats.ndim != 3 or 0 in mats.shape:
            raise InvalidArgumentError(f"Expected (K, N_rx, N_tx) matrices, got shape {mats.shape}")
        freqs = subcarrier_grid(f_c, bandwidth, mats.shape[0])
        return cls(freqs, mats, build_upa(mats.shape[2], 1, f_c=f_c), build_upa(mats.shape[1], 1, f_c=f_c),
                   PLANAR, float(bandwidth))

    @property
    def n_subcarriers(self) -> int:
        return self.subcarrier_frequencies.size

    @property
    def n_rx(self) -> int:
        return self.matrices.shape[1]

    @property
    def n_tx(self) -> int:
        return self.matrices.shape[2]

    @property
    def center_frequency(self) -> float:
        return float(self.subcarrier_frequencies.mean())

    def __getitem__(self, k: int) -> np.ndarray:
        return self.matrices[k]

    def rank(self, threshold: float = 1e-3) -> int:
        """Largest numerical rank over subcarriers."""
        return max(numerical_rank(h, threshold) for h in self.matrices)

    def scaled(self, factor: float) -> "Channel":
        """Copy with every matrix multiplied by `factor`."""
        return Channel(self.subcarrier_frequencies, self.matrices * factor,
                       self.tx_geom, self.rx_geom, self.propagation_mode, self.bandwidth, self.paths)


def subcarrier_grid(f_c: float, bandwidth: float, n_subcarriers: int) -> np.ndarray:
    """
    Uniform subcarrier grid including both band edges.

    Args:
        f_c: Carrier frequency in Hz
        bandwidth: Total bandwidth in Hz (0 means narrowband)
        n_subcarriers: Number of subcarriers K

    Returns:
        (K,) frequencies spanning [f_c - B/2, f_c + B/2]; [f_c] when K = 1
    """
    if f_c <= 0:
        raise InvalidArgumentError(f"Carrier frequency must be positive, got {f_c}")
    if int(n_subcarriers) != n_subcarriers or n_subcarriers < 1:
        raise InvalidArgumentError(f"Subcarrier count must be a positive integer, got {n_subcarriers}")
    if bandwidth < 0:
        raise InvalidArgumentError(f"Bandwidth cannot be negative, got {bandwidth}")
    if bandwidth == 0 and n_subcarriers > 1:
        raise InvalidArgumentError("Zero bandwidth allows a single subcarrier only")
    if bandwidth >= 2 * f_c:
        raise InvalidArgumentError("Bandwidth reaches below 0 Hz")
    if n_subcarriers == 1:
        return np.array([float(f_c)])
    return np.linspace(f_c - bandwidth / 2.0, f_c + bandwidth / 2.0, int(n_subcarriers))


def numerical_rank(matrix: np.ndarray, threshold: float = 1e-3) -> int:
    """
    Count singular values at or above threshold * sigma_max.

    A zero matrix has rank 0.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.size == 0:
        raise InvalidArgumentError(f"Rank needs a non-empty matrix, got shape {m.shape}")
    if not 0.0 < threshold < 1.0:
        raise InvalidArgumentError(f"Relative threshold must lie in (0, 1), got {threshold}")
    sigma = svdvals(m)
    if sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma >= threshold * sigma[0]))


def _curvature_correction(path: Path,
                          tx_points: np.ndarray,
                          rx_points: np.ndarray,
                          rx_offset: np.ndarray):
    """
    Exact and linearized sub-path lengths between point sets.

    tx_points/rx_points are in array-local coordinates. Returns two
    (N_rx_points, N_tx_points) arrays: exact length, far-field length.
    """
    tx_scene = tx_points @ TX_MOUNT.T
    image = path.mirror(tx_scene)
    rx_scene = rx_points + rx_offset
    exact = np.linalg.norm(rx_scene[:, np.newaxis, :] - image[np.newaxis, :, :], axis=-1)
    linear = (path.length
              - (tx_scene @ path.departure.unit_vector)[np.newaxis, :]
              - (rx_points @ path.arrival.unit_vector)[:, np.newaxis])
    return exact, linear


def assemble_channel(paths: PathSet,
                     tx: ArrayGeometry,
                     rx: ArrayGeometry,
                     f_c: float,
                     bandwidth: float,
                     n_subcarriers: int,
                     mode: str = PLANAR,
                     granularity: str = SUBARRAY) -> Channel:
    """
    Build the per-subcarrier channel of a scene.

    Args:
        paths: Rays between the arrays
        tx: Transmit array (local coordinates, planar in its x-y plane)
        rx: Receive array (local coordinates, planar in its x-y plane)
        f_c: Carrier frequency in Hz
        bandwidth: Bandwidth in Hz; 0 forces a single subcarrier
        n_subcarriers: Number of subcarriers
        mode: 'planar' or 'spherical'
        granularity: Spherical correction per subarray-center pair ('subarray')
            or per element pair ('element')

    Returns:
        Channel with physical (Friis) amplitudes
    """
    if tx.n_elements == 0 or rx.n_elements == 0:
        raise InvalidArgumentError("Both arrays need at least one element")
    if mode not in PROPAGATION_MODES:
        raise InvalidArgumentError(f"Unknown propagation mode '{mode}'")
    if granularity not in GRANULARITIES:
        raise InvalidArgumentError(f"Unknown spherical granularity '{granularity}'")
    if mode == SPHERICAL and not np.any(paths.rx_offset):
        raise InvalidArgumentError("Spherical propagation needs the RX array position (rx_offset)")

    freqs = subcarrier_grid(f_c, bandwidth, n_subcarriers)
    matrices = np.zeros((freqs.size, rx.n_elements, tx.n_elements), dtype=complex)

    for path in paths:
        correction = None
        if mode == SPHERICAL:
            if granularity == ELEMENT:
                exact, linear = _curvature_correction(path, tx.elements, rx.elements, paths.rx_offset)
            else:
                exact, linear = _curvature_correction(
                    path, tx.subarray_centers(), rx.subarray_centers(), paths.rx_offset
                )
                exact = exact[np.ix_(rx.subarray_index, tx.subarray_index)]
                linear = linear[np.ix_(rx.subarray_index, tx.subarray_index)]
            correction = (exact, linear)

        for k, f in enumerate(freqs):
            gain = path.amplitude(f) * np.exp(-1j * 2.0 * np.pi * f * path.delay)
            response = np.outer(steering_vector(rx, path.arrival, f),
                                steering_vector(tx, path.departure, f).conj())
            if correction is not None:
                exact, linear = correction
                curvature = np.exp(-1j * 2.0 * np.pi * f / speed_of_light * (exact - linear))
                response = response * curvature * (linear / exact)
            matrices[k] += gain * response

    logger.debug(
        f"Assembled {mode} channel: {len(paths)} path(s), {freqs.size} subcarrier(s), "
        f"{rx.n_elements}x{tx.n_elements}"
    )
    return Channel(freqs, matrices, tx, rx, mode, float(bandwidth), paths)
