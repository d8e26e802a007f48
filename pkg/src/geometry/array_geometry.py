"""
Antenna array layouts and their frequency-dependent responses.

Arrays are planar in the x-y plane with boresight +z. Element positions are
stored in meters so an array can be evaluated at any frequency without
rescaling. Angles follow one convention throughout the package: azimuth is
measured in the array plane from the x-axis, elevation from the plane, so a
direction has unit vector (cos el cos az, cos el sin az, sin el).
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Sequence

import numpy as np
from scipy.constants import speed_of_light
from scipy.spatial.distance import pdist

from ..utils.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Widely-spaced subarray separation used when none is given (meters)
DEFAULT_WSMS_SEPARATION = 0.316


@dataclass(frozen=True)
class Direction:
    """A propagation or steering direction."""
    azimuth: float
    elevation: float

    @property
    def unit_vector(self) -> np.ndarray:
        cos_el = np.cos(self.elevation)
        return np.array([
            cos_el * np.cos(self.azimuth),
            cos_el * np.sin(self.azimuth),
            np.sin(self.elevation),
        ])

    @classmethod
    def from_degrees(cls, azimuth_deg: float, elevation_deg: float) -> "Direction":
        return cls(np.deg2rad(azimuth_deg), np.deg2rad(elevation_deg))

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "Direction":
        """
        Build the direction pointing along a 3D vector.

        Args:
            vector: Any non-zero 3D vector

        Returns:
            Direction whose unit vector is the normalized input
        """
        v = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(v)
        if v.shape != (3,) or norm == 0.0:
            raise InvalidArgumentError(f"Cannot derive a direction from {vector!r}")
        x, y, z = v / norm
        return cls(float(np.arctan2(y, x)), float(np.arcsin(np.clip(z, -1.0, 1.0))))

    def angle_to(self, other: "Direction") -> float:
        """Angle between two directions in radians."""
        cosine = float(np.dot(self.unit_vector, other.unit_vector))
        return float(np.arccos(np.clip(cosine, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """
    3D element positions grouped into subarrays.

    Attributes:
        elements: (N, 3) element positions in meters
        subarray_index: (N,) subarray id per element, ids 0..S-1
        carrier_frequency: Design (carrier) frequency in Hz
    """
    elements: np.ndarray
    subarray_index: np.ndarray
    carrier_frequency: float

    def __post_init__(self):
        elements = np.array(self.elements, dtype=float)
        if elements.ndim != 2 or elements.shape[1] != 3:
            raise InvalidArgumentError(f"Element positions must be (N, 3), got {elements.shape}")
        index = np.array(self.subarray_index, dtype=int)
        if index.shape != (elements.shape[0],):
            raise InvalidArgumentError("subarray_index must hold one id per element")
        if index.size and (index.min() < 0 or not np.array_equal(np.unique(index), np.arange(index.max() + 1))):
            raise InvalidArgumentError("Subarray ids must be contiguous from 0")
        if self.carrier_frequency <= 0:
            raise InvalidArgumentError("Carrier frequency must be positive")
        elements.setflags(write=False)
        index.setflags(write=False)
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, 'subarray_index', index)

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def n_subarrays(self) -> int:
        return int(self.subarray_index.max()) + 1 if self.n_elements else 0

    @property
    def wavelength(self) -> float:
        return speed_of_light / self.carrier_frequency

    @cached_property
    def aperture(self) -> float:
        """Largest distance between any two elements (meters)."""
        if self.n_elements < 2:
            return 0.0
        return float(pdist(self.elements).max())

    def subarray_elements(self, subarray: int) -> np.ndarray:
        """Indices of the elements belonging to one subarray."""
        return np.flatnonzero(self.subarray_index == subarray)

    def subarray_sizes(self) -> List[int]:
        return np.bincount(self.subarray_index, minlength=self.n_subarrays).tolist()

    def subarray_centers(self) -> np.ndarray:
        """(S, 3) centroid of each subarray."""
        return np.array([
            self.elements[self.subarray_elements(s)].mean(axis=0)
            for s in range(self.n_subarrays)
        ])

    def local_positions(self) -> np.ndarray:
        """Element positions relative to their own subarray centroid."""
        centers = self.subarray_centers()
        return self.elements - centers[self.subarray_index]


def build_upa(n_x: int, n_y: int, spacing: float = 0.5, f_c: float = 3e11) -> ArrayGeometry:
    """
    Build a uniform planar array as a single subarray.

    Elements sit at lattice index x spacing x wavelength, x index major
    (element index = ix * n_y + iy), first element at the origin.

    Args:
        n_x: Elements along x
        n_y: Elements along y
        spacing: Lattice pitch in wavelengths at f_c
        f_c: Carrier frequency in Hz

    Returns:
        The array geometry
    """
    if int(n_x) != n_x or int(n_y) != n_y or n_x < 1 or n_y < 1:
        raise InvalidArgumentError(f"Array dimensions must be positive integers, got {n_x}x{n_y}")
    if spacing <= 0:
        raise InvalidArgumentError(f"Element spacing must be positive, got {spacing}")
    if f_c <= 0:
        raise InvalidArgumentError(f"Carrier frequency must be positive, got {f_c}")

    pitch = spacing * speed_of_light / f_c
    ix, iy = np.meshgrid(np.arange(n_x), np.arange(n_y), indexing='ij')
    elements = np.column_stack([
        ix.ravel() * pitch,
        iy.ravel() * pitch,
        np.zeros(n_x * n_y),
    ])
    return ArrayGeometry(elements, np.zeros(n_x * n_y, dtype=int), f_c)


def partition_wsms(base: ArrayGeometry,
                   k: int,
                   separation: float = DEFAULT_WSMS_SEPARATION,
                   axis: int = 0) -> ArrayGeometry:
    """
    Replicate a subarray lattice into k widely-spaced subarrays.

    Args:
        base: Single-subarray layout used for every subarray
        k: Number of subarrays
        separation: Center-to-center spacing in meters
        axis: Coordinate axis (0 = x, 1 = y) along which copies are placed

    Returns:
        Geometry with subarray ids 0..k-1, copy q shifted by q * separation
    """
    if int(k) != k or k < 1:
        raise InvalidArgumentError(f"Subarray count must be a positive integer, got {k}")
    if base.n_subarrays != 1:
        raise InvalidArgumentError("partition_wsms expects a single-subarray base layout")
    if axis not in (0, 1):
        raise InvalidArgumentError("Subarrays are spread along x (0) or y (1)")
    if k == 1:
        return base

    width = float(np.ptp(base.elements[:, axis]))
    if separation < base.aperture or separation <= width:
        raise InvalidArgumentError(
            f"Separation {separation} m overlaps subarrays (aperture {base.aperture:.4g} m)"
        )

    blocks = []
    for q in range(k):
        shifted = base.elements.copy()
        shifted[:, axis] += q * separation
        blocks.append(shifted)
    index = np.repeat(np.arange(k), base.n_elements)
    logger.debug(f"Partitioned {base.n_elements}-element lattice into {k} subarrays, {separation} m apart")
    return ArrayGeometry(np.vstack(blocks), index, base.carrier_frequency)


def split_subarrays(geom: ArrayGeometry, n_subarrays: int) -> ArrayGeometry:
    """
    Relabel an array into contiguous blocks of elements.

    This is the array-of-subarrays partition of a single lattice: with the
    x-major ordering of build_upa each block is a strip of whole columns.
    """
    if n_subarrays < 1 or geom.n_elements % n_subarrays:
        raise InvalidArgumentError(
            f"{geom.n_elements} elements cannot be split into {n_subarrays} equal subarrays"
        )
    size = geom.n_elements // n_subarrays
    index = np.repeat(np.arange(n_subarrays), size)
    return ArrayGeometry(geom.elements, index, geom.carrier_frequency)


def rayleigh_distance(aperture: float, wavelength: float) -> float:
    """
    Boundary between the radiating near field and the far field.

    Args:
        aperture: Array size in meters
        wavelength: Wavelength in meters

    Returns:
        2 * aperture^2 / wavelength in meters
    """
    if wavelength <= 0:
        raise InvalidArgumentError(f"Wavelength must be positive, got {wavelength}")
    if aperture < 0:
        raise InvalidArgumentError(f"Aperture must be non-negative, got {aperture}")
    return aperture ** 2 / (wavelength / 2.0)


def rank_optimal_separation(wavelength: float, distance: float, k: int) -> float:
    """Subarray spacing that makes the k x k LoS sub-path phase matrix orthogonal."""
    if wavelength <= 0 or distance <= 0 or k < 1:
        raise InvalidArgumentError("Wavelength, distance and subarray count must be positive")
    return float(np.sqrt(wavelength * distance / k))


def steering_vector(geom: ArrayGeometry, direction: Direction, f: float) -> np.ndarray:
    """
    Array response toward a direction at frequency f.

    Entry n is exp(+j 2 pi (f/c) <p_n, u>); the phase uses the actual
    frequency, not the carrier.
    """
    if f <= 0:
        raise InvalidArgumentError(f"Frequency must be positive, got {f}")
    projection = geom.elements @ direction.unit_vector
    return np.exp(1j * 2.0 * np.pi * f / speed_of_light * projection)


def steering_matrix(geom: ArrayGeometry, directions: Iterable[Direction], f: float) -> np.ndarray:
    """(N, G) matrix whose columns are steering vectors for each direction."""
    if f <= 0:
        raise InvalidArgumentError(f"Frequency must be positive, got {f}")
    units = np.array([d.unit_vector for d in directions])
    if units.size == 0:
        return np.zeros((geom.n_elements, 0), dtype=complex)
    return np.exp(1j * 2.0 * np.pi * f / speed_of_light * (geom.elements @ units.T))
