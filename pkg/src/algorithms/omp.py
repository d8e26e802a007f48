"""
Spatially sparse precoding: orthogonal matching pursuit over a dictionary of
array steering vectors.
"""
import logging
from typing import List

import numpy as np

from ..architectures.beamformer import HybridBeamformer, normalize_digital
from ..architectures.connectivity import ConnectivityMask
from ..geometry import ArrayGeometry, Direction, steering_matrix
from ..utils.exceptions import InvalidArgumentError, SolverError
from .altmin import MONOTONE_SLACK, as_target, least_squares_digital

logger = logging.getLogger(__name__)

DEFAULT_AZIMUTH_POINTS = 64
DEFAULT_ELEVATION_POINTS = 16


def dictionary_directions(n_azimuth: int = DEFAULT_AZIMUTH_POINTS,
                          n_elevation: int = DEFAULT_ELEVATION_POINTS) -> List[Direction]:
    """Uniform angle grid: azimuth over [-pi, pi), elevation over [0, pi/2]."""
    if n_azimuth < 1 or n_elevation < 1:
        raise InvalidArgumentError("Angle grid sizes must be positive")
    azimuths = np.linspace(-np.pi, np.pi, n_azimuth, endpoint=False)
    elevations = np.linspace(0.0, np.pi / 2.0, n_elevation)
    return [Direction(float(az), float(el)) for el in elevations for az in azimuths]


def build_dictionary(geom: ArrayGeometry,
                     f: float,
                     n_azimuth: int = DEFAULT_AZIMUTH_POINTS,
                     n_elevation: int = DEFAULT_ELEVATION_POINTS) -> np.ndarray:
    """(N, n_azimuth * n_elevation) steering-vector atoms at frequency f."""
    return steering_matrix(geom, dictionary_directions(n_azimuth, n_elevation), f)


def omp_hybrid(target: np.ndarray,
               dictionary: np.ndarray,
               mask: ConnectivityMask,
               n_rf: int) -> HybridBeamformer:
    """
    Greedy atom selection followed by least-squares digital precoding.

    On a wideband target the correlation of every atom with the residual is
    summed over subcarriers, so one analog network serves the whole band.

    Args:
        target: (N, Ns) or (K, N, Ns) fully-digital target
        dictionary: (N, G) unit-modulus atoms
        mask: Fully-connected mask of shape (N, n_rf)
        n_rf: Number of atoms to select

    Returns:
        HybridBeamformer whose residual_history holds ||T - F_RF F_BB||_F after
        every selection
    """
    if n_rf < 1:
        raise InvalidArgumentError("OMP needs at least one RF chain")
    t = as_target(target)
    atoms = np.asarray(dictionary, dtype=complex)
    if atoms.ndim != 2 or atoms.shape[0] != t.shape[1]:
        raise InvalidArgumentError(f"Dictionary {atoms.shape} does not match {t.shape[1]} antennas")
    if atoms.shape[1] < n_rf:
        raise InvalidArgumentError(f"Dictionary holds {atoms.shape[1]} atoms, fewer than {n_rf} RF chains")
    if not np.allclose(np.abs(atoms), 1.0, atol=1e-9):
        raise InvalidArgumentError("Dictionary atoms must have unit-modulus entries")
    atoms = atoms / np.abs(atoms)
    if mask.allowed.shape != (t.shape[1], n_rf) or not mask.is_full:
        raise InvalidArgumentError("OMP designs fully-connected analog networks only")

    selected: List[int] = []
    residual = t.copy()
    history = [float(np.linalg.norm(residual))]
    for _ in range(n_rf):
        correlation = np.einsum('ng,kns->kgs', atoms.conj(), residual)
        score = np.sum(np.abs(correlation) ** 2, axis=(0, 2))
        score[selected] = -np.inf
        selected.append(int(np.argmax(score)))

        analog = atoms[:, selected]
        digital = least_squares_digital(analog, t)
        residual = t - np.einsum('nr,krs->kns', analog, digital)
        history.append(float(np.linalg.norm(residual)))
        if history[-1] > history[-2] + MONOTONE_SLACK * max(history[0], 1.0):
            raise SolverError("OMP residual increased after adding an atom")

    logger.debug(f"OMP residual {history[0]:.4g} -> {history[-1]:.4g} with {n_rf} atoms")
    analog = atoms[:, selected]
    return HybridBeamformer(
        analog=analog,
        digital=normalize_digital(analog, digital),
        mask=mask,
        residual_history=history,
    )
