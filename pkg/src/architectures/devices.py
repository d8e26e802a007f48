"""
Phase-control devices: frequency-flat phase shifters and true-time delays.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..utils.exceptions import InvalidArgumentError

PHASE_SHIFTER = 'phase_shifter'
TTD = 'ttd'
DEVICE_KINDS = (PHASE_SHIFTER, TTD)


def quantize_delays(delays: np.ndarray, bits: int, max_delay: float) -> np.ndarray:
    """
    Round delays to the nearest point of a uniform grid.

    Args:
        delays: Delays in seconds
        bits: Quantizer resolution; the grid has step max_delay / 2**bits
        max_delay: Largest representable delay in seconds

    Returns:
        Quantized delays clipped to [0, max_delay]
    """
    if int(bits) != bits or bits < 0:
        raise InvalidArgumentError(f"Delay resolution must be a non-negative integer, got {bits}")
    if max_delay <= 0:
        raise InvalidArgumentError(f"Maximum delay must be positive, got {max_delay}")
    values = np.asarray(delays, dtype=float)
    if np.any(values < 0):
        raise InvalidArgumentError("Delays cannot be negative")
    step = max_delay / 2 ** int(bits)
    return np.clip(np.round(values / step) * step, 0.0, max_delay)


@dataclass(frozen=True)
class PhaseDevice:
    """
    One phase-control element.

    Attributes:
        kind: 'phase_shifter' or 'ttd'
        setting: Phase in radians (phase shifter) or delay in seconds (TTD)
        ttd_resolution_bits: Delay quantizer resolution, None for continuous delays
        max_delay: Full-scale delay of the quantizer in seconds
    """
    kind: str
    setting: float
    ttd_resolution_bits: Optional[int] = None
    max_delay: Optional[float] = None

    def __post_init__(self):
        if self.kind not in DEVICE_KINDS:
            raise InvalidArgumentError(f"Unknown device kind '{self.kind}'")
        if self.kind != TTD:
            return
        if self.setting < 0:
            raise InvalidArgumentError(f"TTD delay cannot be negative, got {self.setting}")
        if self.ttd_resolution_bits is not None:
            if self.max_delay is None:
                raise InvalidArgumentError("A quantized TTD needs its full-scale delay")
            snapped = quantize_delays(self.setting, self.ttd_resolution_bits, self.max_delay)
            if not np.isclose(snapped, self.setting, rtol=0.0, atol=1e-9 * self.max_delay):
                raise InvalidArgumentError(f"Delay {self.setting} s is not on the quantizer grid")


def phase_response(device: PhaseDevice, f: float) -> complex:
    """
    Complex response of a device at frequency f.

    A phase shifter applies the same phase at every frequency; a TTD applies
    exp(-j 2 pi f tau), a phase linear in frequency.
    """
    return complex(phase_responses(device.kind, np.array([device.setting]), f)[0])


def phase_responses(kind: str, settings: np.ndarray, f: float) -> np.ndarray:
    """Vectorized phase_response over an array of settings of one device kind."""
    if f <= 0:
        raise InvalidArgumentError(f"Frequency must be positive, got {f}")
    values = np.asarray(settings, dtype=float)
    if kind == PHASE_SHIFTER:
        return np.exp(1j * values)
    if kind == TTD:
        if np.any(values < 0):
            raise InvalidArgumentError("TTD delays cannot be negative")
        return np.exp(-1j * 2.0 * np.pi * f * values)
    raise InvalidArgumentError(f"Unknown device kind '{kind}'")
