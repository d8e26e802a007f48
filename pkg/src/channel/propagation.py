"""
Ray-level description of the backhaul link.

The scene frame puts the TX array reference at the origin and the RX array
reference at (0, 0, distance). +z is the link axis and the boresight of both
arrays, +y points up and the ground is the plane y = -height.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from scipy.constants import speed_of_light

from ..geometry import Direction
from ..utils.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

LOS = 'los'
REFLECTION = 'reflection'

DEFAULT_REFLECTION_LOSS_DB = 15.0
DEFAULT_MAX_PATHS = 5


def friis_path_loss_db(d: float, f: float) -> float:
    """
    Free-space spreading loss.

    Args:
        d: Path length in meters
        f: Frequency in Hz

    Returns:
        20 log10(4 pi d f / c) in dB
    """
    if d <= 0 or f <= 0:
        raise InvalidArgumentError(f"Path length and frequency must be positive, got d={d}, f={f}")
    return float(20.0 * np.log10(4.0 * np.pi * d * f / speed_of_light))


@dataclass(frozen=True)
class Path:
    """
    One propagation path.

    Attributes:
        kind: 'los' or 'reflection'
        length: Unfolded path length in meters
        extra_loss_db: Loss on top of free-space spreading
        departure: Direction leaving the TX array
        arrival: Direction at the RX array pointing back along the incoming ray
        reflection_phase: Phase (radians) added at the bounce
        image_plane: y coordinate of the reflecting plane, None for LoS
    """
    kind: str
    length: float
    extra_loss_db: float
    departure: Direction
    arrival: Direction
    reflection_phase: float = 0.0
    image_plane: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (LOS, REFLECTION):
            raise InvalidArgumentError(f"Unknown path kind '{self.kind}'")
        if self.length <= 0:
            raise InvalidArgumentError(f"Path length must be positive, got {self.length}")
        if self.kind == REFLECTION:
            if self.extra_loss_db < DEFAULT_REFLECTION_LOSS_DB:
                raise InvalidArgumentError(
                    f"Reflection loss must be at least {DEFAULT_REFLECTION_LOSS_DB} dB, got {self.extra_loss_db}"
                )
            if self.image_plane is None:
                raise InvalidArgumentError("A reflection path needs the y coordinate of its reflecting plane")
        elif self.extra_loss_db < 0:
            raise InvalidArgumentError("Extra loss cannot be negative")

    @property
    def delay(self) -> float:
        """Propagation delay in seconds."""
        return self.length / speed_of_light

    def amplitude(self, f: float) -> complex:
        """Complex path gain at frequency f, without the delay term."""
        loss_db = friis_path_loss_db(self.length, f) + self.extra_loss_db
        return 10.0 ** (-loss_db / 20.0) * np.exp(1j * self.reflection_phase)

    def mirror(self, points: np.ndarray) -> np.ndarray:
        """Image of scene points across the reflecting plane (identity for LoS)."""
        if self.image_plane is None:
            return points
        image = np.array(points, dtype=float, copy=True)
        image[..., 1] = 2.0 * self.image_plane - image[..., 1]
        return image


@dataclass(frozen=True)
class PathSet:
    """
    The sparse set of paths between one TX and one RX array.

    Attributes:
        paths: Paths, at most one of them LoS
        rx_offset: Scene position of the RX array reference
        max_paths: Upper bound on the path count
    """
    paths: Tuple[Path, ...]
    rx_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    max_paths: int = DEFAULT_MAX_PATHS

    def __post_init__(self):
        paths = tuple(self.paths)
        if not paths:
            raise InvalidArgumentError("A path set needs at least one path")
        if len(paths) > self.max_paths:
            raise InvalidArgumentError(f"{len(paths)} paths exceed the limit of {self.max_paths}")
        if sum(p.kind == LOS for p in paths) > 1:
            raise InvalidArgumentError("A path set holds at most one LoS path")
        offset = np.array(self.rx_offset, dtype=float)
        if offset.shape != (3,):
            raise InvalidArgumentError("rx_offset must be a 3D point")
        offset.setflags(write=False)
        object.__setattr__(self, 'paths', paths)
        object.__setattr__(self, 'rx_offset', offset)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    @property
    def has_los(self) -> bool:
        return any(p.kind == LOS for p in self.paths)

    def without_los(self) -> "PathSet":
        """Blockage what-if: the same scene with the LoS path removed."""
        remaining = [p for p in self.paths if p.kind != LOS]
        if not remaining:
            raise InvalidArgumentError("Removing the LoS path leaves no path")
        logger.debug(f"LoS removed, {len(remaining)} path(s) left")
        return replace(self, paths=tuple(remaining))

    def with_reflection_loss(self, loss_db: float) -> "PathSet":
        """Same scene with every reflection carrying `loss_db` extra loss."""
        paths = [
            replace(p, extra_loss_db=loss_db) if p.kind == REFLECTION else p
            for p in self.paths
        ]
        return replace(self, paths=tuple(paths))


def build_two_path_scenario(distance: float,
                            height: float,
                            reflection_loss_db: float = DEFAULT_REFLECTION_LOSS_DB,
                            reflection_phase: float = np.pi) -> PathSet:
    """
    LoS plus ground-bounce backhaul between two masts of equal height.

    The bounce is built with the image method: the RX image below the ground
    sits at (0, -2h, d), so the reflected ray is sqrt(d^2 + (2h)^2) long and
    leaves atan(2h/d) below the LoS direction.

    Args:
        distance: Horizontal TX-RX distance in meters
        height: Height of both arrays above ground in meters
        reflection_loss_db: Extra loss of the bounce
        reflection_phase: Phase of the reflection coefficient

    Returns:
        PathSet with the LoS path first
    """
    if distance <= 0 or height <= 0:
        raise InvalidArgumentError(f"Distance and height must be positive, got {distance}, {height}")

    los = Path(
        kind=LOS,
        length=float(distance),
        extra_loss_db=0.0,
        departure=Direction.from_vector((0.0, 0.0, 1.0)),
        arrival=Direction.from_vector((0.0, 0.0, -1.0)),
    )

    drop = 2.0 * height
    bounce = Path(
        kind=REFLECTION,
        length=float(np.hypot(distance, drop)),
        extra_loss_db=float(reflection_loss_db),
        departure=Direction.from_vector((0.0, -drop, distance)),
        arrival=Direction.from_vector((0.0, -drop, -distance)),
        reflection_phase=float(reflection_phase),
        image_plane=-float(height),
    )

    logger.debug(f"Two-path scenario: LoS {distance} m, reflection {bounce.length:.3f} m")
    return PathSet((los, bounce), rx_offset=np.array([0.0, 0.0, distance]))

