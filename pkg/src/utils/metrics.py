"""
Utility functions for link-level performance metrics.

This module provides spectral efficiency and data rate, device-level power
consumption, energy efficiency and the frequency-swept array gain used to
quantify beam squint.
"""
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from ..architectures.beamformer import HybridBeamformer
from ..architectures.connectivity import DeviceCensus
from ..architectures.devices import TTD, phase_responses
from ..channel.channel_builder import Channel, subcarrier_grid
from ..geometry import ArrayGeometry, Direction, steering_vector
from .exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Thermal noise density at 290 K, dBm/Hz
THERMAL_NOISE_DBM_PER_HZ = -174.0

POWER = 'power'
AMPLITUDE = 'amplitude'
GAIN_CONVENTIONS = (POWER, AMPLITUDE)

# Smallest linear gain reported before taking the logarithm
GAIN_FLOOR = 1e-30


@dataclass(frozen=True)
class PowerModel:
    """
    Per-device power draw in watts.

    Only p_pa and p_ps are measured figures; the others are defaults that keep
    totals in the several-tens-of-watts regime and can be overridden.
    """
    p_pa: float = 0.060
    p_ps: float = 0.042
    p_rf: float = 0.200
    p_sw: float = 0.005
    p_bb: float = 0.300
    p_ttd: float = 0.080

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise InvalidArgumentError(f"Power model entry {f.name} cannot be negative")

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "PowerModel":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidArgumentError(f"Unknown power model entries: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class RatePowerPoint:
    """
    One operating point of a rate/power trade-off.

    Attributes:
        rate: Data rate in bits/s
        power: Consumed power in watts
        architecture: Architecture name
        closed_switches: Closed switch count (DAoSA), None otherwise
        transmit_power_dbm: Transmit power of the point
        energy_efficiency: bits/J, derived as rate / power
    """
    rate: float
    power: float
    architecture: str = ''
    closed_switches: Optional[int] = None
    transmit_power_dbm: Optional[float] = None
    energy_efficiency: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'energy_efficiency', energy_efficiency(self.rate, self.power))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    return float(10.0 ** ((p_dbm - 30.0) / 10.0))


def noise_power(bandwidth: float, n_subcarriers: int, noise_figure_db: float) -> float:
    """
    Thermal noise power on one subcarrier.

    Args:
        bandwidth: Total signal bandwidth in Hz
        n_subcarriers: Number of subcarriers sharing it
        noise_figure_db: Receiver noise figure

    Returns:
        N0 * B / K in watts, with N0 = 10^((-174 + NF)/10) mW/Hz
    """
    if bandwidth <= 0:
        raise InvalidArgumentError(f"Bandwidth must be positive, got {bandwidth}")
    if n_subcarriers < 1:
        raise InvalidArgumentError(f"Subcarrier count must be positive, got {n_subcarriers}")
    density = 10.0 ** ((THERMAL_NOISE_DBM_PER_HZ + noise_figure_db) / 10.0) * 1e-3
    return float(density * bandwidth / n_subcarriers)


def _as_matrices(channel: Union[Channel, np.ndarray]) -> np.ndarray:
    mats = channel.matrices if isinstance(channel, Channel) else np.asarray(channel, dtype=complex)
    if mats.ndim == 2:
        mats = mats[np.newaxis]
    if mats.ndim != 3:
        raise InvalidArgumentError(f"Expected (K, N_rx, N_tx) channel matrices, got shape {mats.shape}")
    return mats


def _as_precoders(beamformer: Any, total_power: Optional[float]) -> np.ndarray:
    if isinstance(beamformer, HybridBeamformer):
        if total_power is None:
            raise InvalidArgumentError("A hybrid beamformer needs the transmit power to form its precoders")
        return beamformer.transmit_precoders(total_power)
    if hasattr(beamformer, 'precoder'):
        return np.asarray(beamformer.precoder, dtype=complex)
    precoders = np.asarray(beamformer, dtype=complex)
    if precoders.ndim == 2:
        precoders = precoders[np.newaxis]
    return precoders


def spectral_efficiency(channel: Union[Channel, np.ndarray],
                        beamformer: Any,
                        noise_per_subcarrier: Union[float, np.ndarray],
                        total_power: Optional[float] = None) -> float:
    """
    Achievable spectral efficiency averaged over subcarriers.

    SE_k = log2 det(I + H_k F_k F_k^H H_k^H / noise_k), with F_k the precoder
    carrying the transmit power.

    Args:
        channel: Channel or raw (K, N_rx, N_tx) matrices
        beamformer: HybridBeamformer, fully-digital solution or raw precoders
        noise_per_subcarrier: Noise power in watts, scalar or per subcarrier
        total_power: Transmit power in watts, needed for hybrid beamformers

    Returns:
        Spectral efficiency in bits/s/Hz
    """
    mats = _as_matrices(channel)
    precoders = _as_precoders(beamformer, total_power)
    n_sub = mats.shape[0]
    if precoders.ndim != 3 or precoders.shape[0] not in (1, n_sub) or precoders.shape[1] != mats.shape[2]:
        raise InvalidArgumentError(
            f"Precoders {precoders.shape} do not fit channel matrices {mats.shape}"
        )
    noise = np.broadcast_to(np.asarray(noise_per_subcarrier, dtype=float), (n_sub,))
    if np.any(noise <= 0):
        raise InvalidArgumentError("Noise power must be positive")
    if precoders.shape[2] == 0:
        return 0.0

    total = 0.0
    for k in range(n_sub):
        received = mats[k] @ precoders[k if precoders.shape[0] > 1 else 0]
        gram = received.conj().T @ received / noise[k]
        _, logdet = np.linalg.slogdet(np.eye(gram.shape[0]) + gram)
        total += logdet / np.log(2.0)
    return float(total / n_sub)


def data_rate(se: float, bandwidth: float) -> float:
    """Data rate in bits/s from spectral efficiency and bandwidth."""
    if bandwidth < 0:
        raise InvalidArgumentError(f"Bandwidth cannot be negative, got {bandwidth}")
    return float(se * bandwidth)


def power_consumption(census: DeviceCensus, model: PowerModel) -> float:
    """
    Total consumed power of an architecture.

    Args:
        census: Hardware counts
        model: Per-device power draw

    Returns:
        P = PAs*p_pa + active phase devices*(p_ps or p_ttd) + chains*p_rf
            + closed switches*p_sw + p_bb, in watts
    """
    counts = census.to_dict()
    if any(value < 0 for value in counts.values()):
        raise InvalidArgumentError("Device counts cannot be negative")
    p_phase = model.p_ttd if census.device_kind == TTD else model.p_ps
    return float(
        census.power_amplifiers * model.p_pa
        + census.phase_devices_active * p_phase
        + census.rf_chains * model.p_rf
        + census.switches_closed * model.p_sw
        + model.p_bb
    )


def energy_efficiency(rate: float, power: float) -> float:
    """Energy efficiency in bits per joule."""
    if power <= 0:
        raise InvalidArgumentError(f"Power must be positive, got {power}")
    return float(rate / power)


def array_gain_sweep(geom: ArrayGeometry,
                     entry: Any,
                     target: Direction,
                     band: Tuple[float, float, int],
                     convention: str = POWER) -> np.ndarray:
    """
    Normalized array gain of a codebook entry across a band.

    Args:
        geom: Array the entry drives
        entry: Codebook entry exposing `device` and per-element `settings`
        target: Direction the gain is evaluated toward
        band: (f_c, bandwidth, K)
        convention: 'power' for 10 log10(|a^H w|^2 / N), 'amplitude' for
            10 log10(|a^H w| / sqrt(N)); w is unit norm in both. Amplitude
            values are half the power values in dB

    Returns:
        (K,) gains in dB, 0 dB meaning perfectly matched
    """
    if convention not in GAIN_CONVENTIONS:
        raise InvalidArgumentError(f"Unknown gain convention '{convention}'")
    f_c, bandwidth, n_subcarriers = band
    if n_subcarriers < 1:
        raise InvalidArgumentError("Array gain needs at least one subcarrier")
    settings = np.asarray(entry.settings, dtype=float)
    if settings.shape != (geom.n_elements,):
        raise InvalidArgumentError(f"Entry has {settings.size} settings for {geom.n_elements} elements")

    n = geom.n_elements
    gains = np.empty(int(n_subcarriers))
    for k, f in enumerate(subcarrier_grid(f_c, bandwidth, int(n_subcarriers))):
        weights = phase_responses(entry.device, settings, f) / np.sqrt(n)
        coherent = np.abs(np.vdot(steering_vector(geom, target, f), weights)) ** 2 / n
        gains[k] = max(coherent, GAIN_FLOOR)

    gains_db = 10.0 * np.log10(gains)
    if convention == AMPLITUDE:
        gains_db = gains_db / 2.0
    return gains_db
