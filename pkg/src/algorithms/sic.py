"""
Successive interference cancellation design for array-of-subarrays.
"""
import logging
from typing import Optional

import numpy as np
from scipy.linalg import eigh

from ..architectures.beamformer import HybridBeamformer, normalize_digital, unit_phase
from ..architectures.connectivity import ConnectivityMask, subarray_of_antennas
from ..channel.channel_builder import Channel
from ..utils.exceptions import InvalidArgumentError
from .fully_digital import refine_digital

logger = logging.getLogger(__name__)


def aosa_partition(channel: Channel, n_rf: int) -> np.ndarray:
    """Subarray id per TX antenna for an AoSA with n_rf subarrays."""
    tx = channel.tx_geom
    if tx.n_subarrays == n_rf:
        return np.asarray(tx.subarray_index)
    if tx.n_subarrays == 1:
        return subarray_of_antennas(tx.n_elements, n_rf)
    raise InvalidArgumentError(
        f"AoSA with {n_rf} RF chains cannot use an array of {tx.n_subarrays} subarrays"
    )


def sic_aosa(channel: Channel,
             n_rf: int,
             total_power: float,
             noise: float,
             max_streams: Optional[int] = None) -> HybridBeamformer:
    """
    Design the AoSA analog network one subarray at a time.

    Subarray s takes the unit-modulus projection of the dominant eigenvector
    of its block of the remaining Gram matrix; the Gram matrix is then
    deflated by the signal subarray s carries, so later subarrays see what is
    left. The digital part is waterfilled over the resulting effective channel.

    Args:
        channel: Channel
        n_rf: RF chain count, one per subarray
        total_power: Transmit power in watts
        noise: Noise power per subcarrier in watts
        max_streams: Stream cap for the digital stage

    Returns:
        HybridBeamformer; residual_history holds the cumulative spectral
        efficiency after each subarray
    """
    if n_rf < 1:
        raise InvalidArgumentError("SIC needs at least one subarray")
    if total_power <= 0 or noise <= 0:
        raise InvalidArgumentError("Transmit power and noise must be positive")
    owner = aosa_partition(channel, n_rf)

    n_antennas = channel.n_tx
    per_chain = total_power / (channel.n_subcarriers * n_rf)
    gram = np.einsum('kra,krb->ab', channel.matrices.conj(), channel.matrices) / channel.n_subcarriers

    analog = np.zeros((n_antennas, n_rf), dtype=complex)
    cumulative = []
    total = 0.0
    for s in range(n_rf):
        rows = np.flatnonzero(owner == s)
        size = rows.size
        block = gram[np.ix_(rows, rows)]
        _, vector = eigh(block, subset_by_index=[size - 1, size - 1])
        analog[rows, s] = unit_phase(vector[:, 0])

        x = np.zeros(n_antennas, dtype=complex)
        x[rows] = np.sqrt(per_chain / size) * analog[rows, s]
        gx = gram @ x
        gain = float(np.real(np.vdot(x, gx)))
        total += np.log2(1.0 + max(gain, 0.0) / noise)
        cumulative.append(total)
        gram = gram - np.outer(gx, gx.conj()) / (noise + gain)

    logger.debug(f"SIC over {n_rf} subarrays: cumulative SE {[round(v, 4) for v in cumulative]}")
    mask = ConnectivityMask(owner[:, np.newaxis] == np.arange(n_rf)[np.newaxis, :])
    identity = np.broadcast_to(np.eye(n_rf, dtype=complex), (channel.n_subcarriers, n_rf, n_rf))
    draft = HybridBeamformer(
        analog=analog,
        digital=normalize_digital(analog, identity.copy()),
        mask=mask,
        residual_history=cumulative,
    )
    return refine_digital(channel, draft, total_power, noise, max_streams)
