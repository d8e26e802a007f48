"""
Fully-digital SVD precoding with waterfilling, and the digital stage shared
by every hybrid architecture.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import svd

from ..architectures.beamformer import HybridBeamformer
from ..channel.channel_builder import Channel
from ..utils.exceptions import InvalidArgumentError
from ..utils.metrics import data_rate, spectral_efficiency

logger = logging.getLogger(__name__)

RANK_THRESHOLD = 1e-3


def waterfilling(gains: np.ndarray, noise: float, total_power: float) -> np.ndarray:
    """
    Optimal power split over parallel channels.

    Args:
        gains: Per-mode power gains, all positive
        noise: Noise power in watts
        total_power: Power budget in watts

    Returns:
        p_i = max(0, mu - noise / gains_i) with sum(p) = total_power
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidArgumentError("Waterfilling needs a non-empty vector of gains")
    if np.any(g <= 0):
        raise InvalidArgumentError("Waterfilling gains must be positive")
    if total_power <= 0 or noise <= 0:
        raise InvalidArgumentError("Power budget and noise must be positive")

    order = np.argsort(g)[::-1]
    floors = noise / g[order]
    cumulative = np.cumsum(floors)
    for active in range(g.size, 0, -1):
        level = (total_power + cumulative[active - 1]) / active
        if level > floors[active - 1]:
            break

    powers = np.zeros_like(g)
    powers[order[:active]] = level - floors[:active]
    return powers


@dataclass(eq=False)
class FullyDigitalSolution:
    """
    Unconstrained precoder of a channel.

    Attributes:
        precoder: (K, N, Ns) precoders carrying the transmit power
        power_allocation: (K, Ns) watts per stream
        singular_values: (K, Ns) channel gains of the used modes
        spectral_efficiency: bits/s/Hz averaged over subcarriers
        achievable_rate: bits/s
    """
    precoder: np.ndarray
    power_allocation: np.ndarray
    singular_values: np.ndarray
    spectral_efficiency: float
    achievable_rate: float

    @property
    def n_streams(self) -> int:
        return self.precoder.shape[2]

    @property
    def total_power(self) -> float:
        return float(self.power_allocation.sum())

    def target(self) -> np.ndarray:
        """
        Precoders rescaled so every subcarrier has squared norm Ns.

        This is the matrix hybrid solvers approximate.
        """
        if self.n_streams == 0:
            return self.precoder.copy()
        n_sub = self.precoder.shape[0]
        return self.precoder * np.sqrt(self.n_streams * n_sub / self.total_power)


def _mode_count(sigma: np.ndarray, threshold: float) -> int:
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.count_nonzero(sigma >= threshold * sigma[0]))


def fully_digital_baseline(channel: Channel,
                           total_power: float,
                           noise: float,
                           max_streams: int,
                           rank_threshold: float = RANK_THRESHOLD) -> FullyDigitalSolution:
    """
    SVD precoding with waterfilling on every subcarrier.

    Args:
        channel: Channel to precode
        total_power: Transmit power in watts, split evenly over subcarriers
        noise: Noise power per subcarrier in watts
        max_streams: Stream cap (typically the RF chain count)
        rank_threshold: Relative singular value threshold defining the rank

    Returns:
        FullyDigitalSolution with Ns = min(max_streams, numerical rank)
    """
    if max_streams < 1 or max_streams > min(channel.n_rx, channel.n_tx):
        raise InvalidArgumentError(
            f"Stream count {max_streams} outside 1..{min(channel.n_rx, channel.n_tx)}"
        )
    if total_power <= 0 or noise <= 0:
        raise InvalidArgumentError("Transmit power and noise must be positive")

    n_sub = channel.n_subcarriers
    per_subcarrier = total_power / n_sub
    decompositions = [svd(h, full_matrices=False) for h in channel.matrices]
    rank = max(_mode_count(s, rank_threshold) for _, s, _ in decompositions)
    n_streams = min(max_streams, rank)

    precoder = np.zeros((n_sub, channel.n_tx, n_streams), dtype=complex)
    powers = np.zeros((n_sub, n_streams))
    sigmas = np.zeros((n_sub, n_streams))
    for k, (_, s, vh) in enumerate(decompositions):
        if n_streams == 0:
            break
        sigma = s[:n_streams]
        usable = sigma > 0
        if usable.any():
            powers[k, usable] = waterfilling(sigma[usable] ** 2, noise, per_subcarrier)
        sigmas[k] = sigma
        precoder[k] = vh[:n_streams].conj().T * np.sqrt(powers[k])

    se = float(np.mean(np.sum(np.log2(1.0 + powers * sigmas ** 2 / noise), axis=1)))
    if n_streams == 0:
        logger.warning("Channel has no usable mode, fully-digital rate is zero")
    logger.debug(f"Fully-digital baseline: {n_streams} stream(s), SE {se:.4f} b/s/Hz")
    return FullyDigitalSolution(
        precoder=precoder,
        power_allocation=powers,
        singular_values=sigmas,
        spectral_efficiency=se,
        achievable_rate=data_rate(se, channel.bandwidth),
    )


def refine_digital(channel: Channel,
                   beamformer: HybridBeamformer,
                   total_power: float,
                   noise: float,
                   max_streams: Optional[int] = None,
                   rank_threshold: float = RANK_THRESHOLD) -> HybridBeamformer:
    """
    Replace the digital part by waterfilled SVD precoding of H F_RF.

    The analog matrix is kept. Precoding runs on an orthonormal basis of its
    column space, so the result is rate-optimal for that analog network.

    Args:
        channel: Channel
        beamformer: Beamformer whose analog network is kept
        total_power: Transmit power in watts
        noise: Noise power per subcarrier in watts
        max_streams: Stream cap, defaults to the RF chain count

    Returns:
        HybridBeamformer with the new digital precoders
    """
    analog = beamformer.analog
    if analog.shape[0] != channel.n_tx:
        raise InvalidArgumentError(
            f"Analog network drives {analog.shape[0]} antennas, channel has {channel.n_tx}"
        )
    if total_power <= 0 or noise <= 0:
        raise InvalidArgumentError("Transmit power and noise must be positive")
    cap = beamformer.n_rf if max_streams is None else min(max_streams, beamformer.n_rf)

    u_f, s_f, vh_f = svd(analog, full_matrices=False)
    basis_rank = _mode_count(s_f, 1e-10)
    basis = u_f[:, :basis_rank]
    to_digital = vh_f[:basis_rank].conj().T / s_f[:basis_rank]

    n_sub = channel.n_subcarriers
    per_subcarrier = total_power / n_sub
    effective = [svd(h @ basis, full_matrices=False) for h in channel.matrices]
    n_streams = min([cap] + [_mode_count(s, rank_threshold) for _, s, _ in effective])

    digital = np.zeros((n_sub, beamformer.n_rf, n_streams), dtype=complex)
    for k, (_, s, vh) in enumerate(effective):
        if n_streams == 0:
            break
        sigma = s[:n_streams]
        powers = np.zeros(n_streams)
        usable = sigma > 0
        powers[usable] = waterfilling(sigma[usable] ** 2, noise, per_subcarrier)
        inner = vh[:n_streams].conj().T * np.sqrt(powers)
        digital[k] = to_digital @ inner * np.sqrt(n_streams / per_subcarrier)

    return HybridBeamformer(
        analog=analog,
        digital=digital,
        mask=beamformer.mask,
        device=beamformer.device,
        switches=beamformer.switches,
        residual_history=list(beamformer.residual_history),
    )


def effective_rate(channel: Channel,
                   beamformer: HybridBeamformer,
                   total_power: float,
                   noise: float,
                   max_streams: Optional[int] = None) -> float:
    """Data rate in bits/s of an analog network with its refined digital stage."""
    refined = refine_digital(channel, beamformer, total_power, noise, max_streams)
    se = spectral_efficiency(channel, refined, noise, total_power)
    return data_rate(se, channel.bandwidth)
