"""
Alternating minimization of ||T - F_RF F_BB||_F under an arbitrary
connectivity mask.

The digital half-step is least squares. The analog half-step sweeps the RF
chains; with the other columns fixed, every masked-in entry of column j has
the closed-form phase of

    r_j = (sum_k T_k D_k^H)[:, j] - F G[:, j] + F[:, j] G[j, j],  G = sum_k D_k D_k^H

which is the element-by-element (EBE) update. It reduces to
arg([T D^H]_ij) when the digital rows are orthogonal.
"""
import logging
from typing import List, Optional

import numpy as np
from scipy.linalg import pinv

from ..architectures.beamformer import HybridBeamformer, normalize_digital, unit_phase
from ..architectures.connectivity import ConnectivityMask
from ..architectures.devices import PHASE_SHIFTER
from ..utils.exceptions import InvalidArgumentError, SolverError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 200
DEFAULT_TOL = 1e-6
MONOTONE_SLACK = 1e-9


def as_target(target: np.ndarray) -> np.ndarray:
    """Promote a single (N, Ns) target to (1, N, Ns)."""
    t = np.asarray(target, dtype=complex)
    if t.ndim == 2:
        t = t[np.newaxis]
    if t.ndim != 3:
        raise InvalidArgumentError(f"Target must be (N, Ns) or (K, N, Ns), got shape {t.shape}")
    return t


def least_squares_digital(analog: np.ndarray, target: np.ndarray) -> np.ndarray:
    """(K, N_RF, Ns) minimizers of ||T_k - F D_k||_F for a fixed analog matrix."""
    return np.einsum('rn,kns->krs', pinv(analog), target)


def objective(analog: np.ndarray, digital: np.ndarray, target: np.ndarray) -> float:
    """Squared Frobenius residual summed over subcarriers."""
    residual = target - np.einsum('nr,krs->kns', analog, digital)
    return float(np.sum(np.abs(residual) ** 2))


def ebe_sweep(analog: np.ndarray,
              digital: np.ndarray,
              target: np.ndarray,
              allowed: np.ndarray,
              update: Optional[np.ndarray] = None) -> np.ndarray:
    """
    One exact coordinate-descent pass over the RF chains.

    Args:
        analog: Current (N, N_RF) analog matrix
        digital: Fixed (K, N_RF, Ns) digital precoders
        target: (K, N, Ns) target
        allowed: (N, N_RF) mask
        update: Entries allowed to change, defaults to the whole mask

    Returns:
        The updated analog matrix
    """
    analog = analog.copy()
    update = allowed if update is None else update
    correlation = np.einsum('kns,krs->nr', target, digital.conj())
    gram = np.einsum('kas,kbs->ab', digital, digital.conj())
    for j in range(analog.shape[1]):
        rows = update[:, j]
        if not rows.any():
            continue
        r = correlation[:, j] - analog @ gram[:, j] + analog[:, j] * gram[j, j]
        analog[rows, j] = unit_phase(r[rows])
    return analog


def initial_analog(target: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """
    Deterministic start: phases of the target at the center subcarrier.

    Chains beyond the stream count reuse a target column tilted by one DFT
    bin per wrap, so no two chains start identical.
    """
    n_antennas, n_rf = allowed.shape
    center = target[target.shape[0] // 2]
    n_streams = center.shape[1]
    ramp = np.arange(n_antennas) / n_antennas
    columns = []
    for j in range(n_rf):
        base = center[:, j % n_streams] if n_streams else np.ones(n_antennas)
        tilt = np.exp(1j * 2.0 * np.pi * (j // max(n_streams, 1)) * ramp)
        columns.append(unit_phase(base) * tilt)
    return np.where(allowed, np.column_stack(columns), 0.0)


def _warm_start(start: np.ndarray, target: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    start = np.asarray(start, dtype=complex)
    if start.shape != allowed.shape:
        raise InvalidArgumentError(f"Initial analog matrix {start.shape} does not match mask {allowed.shape}")
    missing = allowed & (np.abs(start) == 0)
    analog = np.where(allowed & ~missing, unit_phase(start), 0.0)
    if missing.any():
        # fill new entries with their EBE phase given the incumbent
        digital = least_squares_digital(analog, target)
        analog = ebe_sweep(analog, digital, target, allowed, update=missing)
    return analog


def altmin_hybrid(target: np.ndarray,
                  mask: ConnectivityMask,
                  n_rf: int,
                  max_iter: int = DEFAULT_MAX_ITER,
                  tol: float = DEFAULT_TOL,
                  initial_analog_matrix: Optional[np.ndarray] = None,
                  allow_dark: bool = False,
                  device: str = PHASE_SHIFTER) -> HybridBeamformer:
    """
    Hybrid approximation of a fully-digital target by alternating minimization.

    Args:
        target: (N, Ns) or (K, N, Ns) fully-digital target
        mask: Connectivity mask of shape (N, n_rf)
        n_rf: RF chain count
        max_iter: Iteration cap
        tol: Stop once an iteration lowers the objective by less than this fraction
        initial_analog_matrix: Warm start; zero entries on the mask are filled by EBE
        allow_dark: Accept antennas no RF chain reaches
        device: Phase device kind recorded on the result

    Returns:
        HybridBeamformer normalized to ||F_RF F_BB[k]||_F^2 = Ns, with the
        Frobenius residual after every half-step in residual_history

    Raises:
        SolverError: If a half-step increases the objective
    """
    t = as_target(target)
    allowed = mask.allowed
    if allowed.shape != (t.shape[1], n_rf):
        raise InvalidArgumentError(
            f"Mask {allowed.shape} does not match {t.shape[1]} antennas x {n_rf} chains"
        )
    dark = mask.dark_antennas()
    if dark.size and not allow_dark:
        raise InvalidArgumentError(f"{dark.size} antenna(s) are not reachable by any RF chain")
    if max_iter < 1:
        raise InvalidArgumentError("Iteration cap must be at least 1")

    if initial_analog_matrix is None:
        analog = initial_analog(t, allowed)
    else:
        analog = _warm_start(initial_analog_matrix, t, allowed)

    scale = float(np.sum(np.abs(t) ** 2))
    history: List[float] = []
    digital = least_squares_digital(analog, t)
    current = objective(analog, digital, t)
    history.append(np.sqrt(current))

    def check(previous: float, value: float, step: str) -> None:
        if value > previous + MONOTONE_SLACK * max(previous, scale):
            raise SolverError(f"Objective rose from {previous:.6g} to {value:.6g} in the {step} step")

    iterations = 0
    for iterations in range(1, max_iter + 1):
        start = current

        analog = ebe_sweep(analog, digital, t, allowed)
        value = objective(analog, digital, t)
        check(current, value, 'analog')
        current = value
        history.append(np.sqrt(current))

        digital = least_squares_digital(analog, t)
        value = objective(analog, digital, t)
        check(current, value, 'digital')
        current = value
        history.append(np.sqrt(current))

        if start - current <= tol * max(start, np.finfo(float).tiny):
            break

    logger.debug(
        f"altmin stopped after {iterations} iteration(s), residual {history[-1]:.4g} "
        f"(relative {np.sqrt(current / scale) if scale else 0.0:.3g})"
    )
    return HybridBeamformer(
        analog=analog,
        digital=normalize_digital(analog, digital),
        mask=mask,
        device=device,
        residual_history=history,
    )
