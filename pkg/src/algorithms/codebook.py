"""
Beam codebooks for phase-shifter and true-time-delay analog networks.

A phase-shifter entry matches the array response at the carrier only, so its
beam drifts off target across a wide band. A TTD entry aligns the element
signals in time, which matches the response at every frequency.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.constants import speed_of_light

from ..architectures.devices import DEVICE_KINDS, PHASE_SHIFTER, TTD, PhaseDevice, quantize_delays
from ..geometry import ArrayGeometry, Direction
from ..utils.exceptions import InvalidArgumentError
from ..utils.metrics import POWER, array_gain_sweep

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CodebookEntry:
    """
    Per-element settings steering toward one direction.

    Attributes:
        device: 'phase_shifter' or 'ttd'
        settings: (N,) radians or seconds
        direction: Direction the entry was generated for
    """
    device: str
    settings: np.ndarray
    direction: Direction

    def __post_init__(self):
        if self.device not in DEVICE_KINDS:
            raise InvalidArgumentError(f"Unknown device kind '{self.device}'")
        settings = np.array(self.settings, dtype=float)
        if settings.ndim != 1:
            raise InvalidArgumentError("Codebook settings must be one value per element")
        if self.device == TTD and np.any(settings < 0):
            raise InvalidArgumentError("TTD delays cannot be negative")
        settings.setflags(write=False)
        object.__setattr__(self, 'settings', settings)

    def devices(self, ttd_resolution_bits: Optional[int] = None,
                max_delay: Optional[float] = None) -> List[PhaseDevice]:
        """The entry as one PhaseDevice per element."""
        return [PhaseDevice(self.device, float(s), ttd_resolution_bits, max_delay) for s in self.settings]


@dataclass(frozen=True, eq=False)
class Codebook:
    """
    Beam codebook over an angle grid.

    Attributes:
        entries: One entry per grid direction
        carrier_frequency: Frequency the phase-shifter entries are matched at
        ttd_resolution_bits: Delay quantizer resolution, None if continuous
        max_delay: Full-scale delay of the quantizer
    """
    entries: List[CodebookEntry] = field(default_factory=list)
    carrier_frequency: float = 3e11
    ttd_resolution_bits: Optional[int] = None
    max_delay: Optional[float] = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index: int) -> CodebookEntry:
        return self.entries[index]


def build_codebook(geom: ArrayGeometry,
                   directions: Sequence[Direction],
                   device_kind: str,
                   f_c: float,
                   ttd_bits: Optional[int] = None,
                   max_delay: Optional[float] = None) -> Codebook:
    """
    Build one entry per direction.

    Phase shifters get theta_n = 2 pi (f_c / c) <p_n, u>. TTDs get
    tau_n = (max_m <p_m, u> - <p_n, u>) / c, referenced to the leading
    element so every delay is non-negative; the common offset does not
    change the beam.

    Args:
        geom: Array geometry
        directions: Angle grid
        device_kind: 'phase_shifter' or 'ttd'
        f_c: Carrier frequency in Hz
        ttd_bits: Delay quantizer resolution, None for continuous delays
        max_delay: Quantizer full scale, defaults to aperture / c

    Returns:
        Codebook with len(directions) entries
    """
    if device_kind not in DEVICE_KINDS:
        raise InvalidArgumentError(f"Unknown device kind '{device_kind}'")
    if f_c <= 0:
        raise InvalidArgumentError(f"Carrier frequency must be positive, got {f_c}")
    directions = list(directions)
    if not directions:
        raise InvalidArgumentError("Codebook needs at least one direction")
    if ttd_bits is not None and device_kind == TTD and max_delay is None:
        max_delay = geom.aperture / speed_of_light
        if max_delay <= 0:
            raise InvalidArgumentError("A single-element array has no delay range to quantize")

    units = np.array([d.unit_vector for d in directions])
    projections = geom.elements @ units.T

    entries = []
    for g, direction in enumerate(directions):
        projection = projections[:, g]
        if device_kind == PHASE_SHIFTER:
            settings = 2.0 * np.pi * f_c / speed_of_light * projection
        else:
            settings = (projection.max() - projection) / speed_of_light
            if ttd_bits is not None:
                settings = quantize_delays(settings, ttd_bits, max_delay)
        entries.append(CodebookEntry(device_kind, settings, direction))

    logger.debug(f"Built {device_kind} codebook with {len(entries)} entries")
    return Codebook(
        entries=entries,
        carrier_frequency=f_c,
        ttd_resolution_bits=ttd_bits if device_kind == TTD else None,
        max_delay=max_delay if device_kind == TTD else None,
    )


def ttd_codebook_select(geom: ArrayGeometry,
                        band: Tuple[float, float, int],
                        directions: Sequence[Direction],
                        device: str,
                        target: Direction,
                        ttd_bits: Optional[int] = None,
                        convention: str = POWER) -> Tuple[CodebookEntry, np.ndarray]:
    """
    Pick the codebook entry with the best worst-subcarrier gain toward a target.

    Args:
        geom: Array geometry
        band: (f_c, bandwidth, K)
        directions: Angle grid the codebook is built on
        device: 'phase_shifter' or 'ttd'
        target: Direction of the user
        ttd_bits: Delay quantizer resolution for TTD codebooks
        convention: Gain convention passed to array_gain_sweep

    Returns:
        (entry, per-subcarrier gains in dB)
    """
    f_c = band[0]
    codebook = build_codebook(geom, directions, device, f_c, ttd_bits=ttd_bits)

    best_entry, best_gains = None, None
    for entry in codebook:
        gains = array_gain_sweep(geom, entry, target, band, convention=convention)
        # ties keep the earlier grid point
        if best_gains is None or gains.min() > best_gains.min():
            best_entry, best_gains = entry, gains

    logger.debug(
        f"{device} codebook selected az {np.degrees(best_entry.direction.azimuth):.2f} deg, "
        f"el {np.degrees(best_entry.direction.elevation):.2f} deg, worst gain {best_gains.min():.3f} dB"
    )
    return best_entry, best_gains
