"""
Widely-spaced multi-subarray (WSMS) design by block decomposition.

The analog matrix of a WSMS array is block diagonal: every RF chain drives
one subarray. Fitting a block-diagonal F_RF F_BB to the fully-digital target
splits into one fully-connected problem per subarray on the target rows of
that subarray.
"""
import logging
from typing import Optional

import numpy as np

from ..architectures.beamformer import HybridBeamformer, normalize_digital
from ..architectures.connectivity import WSMS, ConnectivityMask, connectivity, wsms_chain_assignment
from ..channel.channel_builder import Channel
from ..utils.exceptions import InvalidArgumentError
from .altmin import DEFAULT_MAX_ITER, DEFAULT_TOL, altmin_hybrid, least_squares_digital
from .fully_digital import fully_digital_baseline

logger = logging.getLogger(__name__)


def wsms_solve(channel: Channel,
               k_subarrays: int,
               n_rf: int,
               total_power: float,
               noise: float,
               max_streams: Optional[int] = None,
               mask: Optional[ConnectivityMask] = None,
               max_iter: int = DEFAULT_MAX_ITER,
               tol: float = DEFAULT_TOL) -> HybridBeamformer:
    """
    Hybrid precoding for a WSMS transmitter.

    Args:
        channel: Channel whose TX geometry has k_subarrays subarrays (spherical
            mode captures the intra-path multiplexing)
        k_subarrays: Number of widely-spaced subarrays
        n_rf: RF chain count, at least k_subarrays
        total_power: Transmit power in watts
        noise: Noise power per subcarrier in watts
        max_streams: Stream cap, defaults to n_rf
        mask: Expected connectivity; must be the WSMS block mask when given

    Returns:
        HybridBeamformer with a block-diagonal analog matrix
    """
    tx = channel.tx_geom
    if tx.n_subarrays != k_subarrays:
        raise InvalidArgumentError(
            f"Channel TX array has {tx.n_subarrays} subarrays, expected {k_subarrays}"
        )
    block_mask = connectivity(WSMS, tx.n_elements, n_rf, k_subarrays)
    if mask is not None and mask != block_mask:
        raise InvalidArgumentError("WSMS needs a block-diagonal mask at subarray granularity")

    streams = n_rf if max_streams is None else min(max_streams, n_rf)
    baseline = fully_digital_baseline(channel, total_power, noise, streams)
    target = baseline.target()

    owner = np.asarray(tx.subarray_index)
    chain_owner = wsms_chain_assignment(n_rf, k_subarrays)
    analog = np.zeros((tx.n_elements, n_rf), dtype=complex)
    history = []
    for q in range(k_subarrays):
        rows = np.flatnonzero(owner == q)
        chains = np.flatnonzero(chain_owner == q)
        block = altmin_hybrid(
            target[:, rows, :],
            ConnectivityMask(np.ones((rows.size, chains.size), dtype=bool)),
            chains.size,
            max_iter=max_iter,
            tol=tol,
        )
        analog[np.ix_(rows, chains)] = block.analog
        history.append(block.residual_history[-1])

    # F_RF is block diagonal, so one global least-squares solve stacks the block solutions
    digital = least_squares_digital(analog, target)
    logger.debug(f"WSMS: {k_subarrays} block(s), {baseline.n_streams} stream(s), block residuals {history}")
    return HybridBeamformer(
        analog=analog,
        digital=normalize_digital(analog, digital),
        mask=block_mask,
        residual_history=history,
    )
