"""
Hybrid (analog x digital) precoder container.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..utils.exceptions import InvalidArgumentError, SolverError
from .connectivity import ConnectivityMask, SwitchNetwork
from .devices import DEVICE_KINDS, PHASE_SHIFTER

logger = logging.getLogger(__name__)

UNIT_MODULUS_TOL = 1e-12
POWER_TOL = 1e-9


@dataclass(eq=False)
class HybridBeamformer:
    """
    Analog network plus per-subcarrier digital precoders.

    Attributes:
        analog: (N, N_RF) matrix, unit modulus on the mask, exact zeros off it
        digital: (K, N_RF, Ns) digital precoders
        mask: Connectivity the analog matrix must respect
        device: Phase device kind of the analog network
        switches: Switch states when the mask came from a DAoSA network
        residual_history: Objective trace of the solver that produced it
    """
    analog: np.ndarray
    digital: np.ndarray
    mask: ConnectivityMask
    device: str = PHASE_SHIFTER
    switches: Optional[SwitchNetwork] = None
    residual_history: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.analog = np.asarray(self.analog, dtype=complex)
        digital = np.asarray(self.digital, dtype=complex)
        if digital.ndim == 2:
            digital = digital[np.newaxis]
        self.digital = digital
        if self.device not in DEVICE_KINDS:
            raise InvalidArgumentError(f"Unknown device kind '{self.device}'")
        if self.analog.shape != self.mask.allowed.shape:
            raise InvalidArgumentError(
                f"Analog matrix {self.analog.shape} does not match mask {self.mask.allowed.shape}"
            )
        if digital.ndim != 3 or digital.shape[1] != self.analog.shape[1]:
            raise InvalidArgumentError(
                f"Digital precoders {digital.shape} do not match {self.analog.shape[1]} RF chains"
            )
        self.validate()

    @property
    def n_antennas(self) -> int:
        return self.analog.shape[0]

    @property
    def n_rf(self) -> int:
        return self.analog.shape[1]

    @property
    def n_streams(self) -> int:
        return self.digital.shape[2]

    @property
    def n_subcarriers(self) -> int:
        return self.digital.shape[0]

    def precoders(self) -> np.ndarray:
        """(K, N, Ns) composite precoders F_RF F_BB[k], each with squared norm Ns."""
        return np.einsum('nr,krs->kns', self.analog, self.digital)

    def transmit_precoders(self, total_power: float) -> np.ndarray:
        """
        Precoders carrying the transmit power.

        The power is split evenly over subcarriers; within a subcarrier the
        digital part keeps its own stream split.
        """
        if total_power < 0:
            raise InvalidArgumentError(f"Transmit power cannot be negative, got {total_power}")
        if self.n_streams == 0:
            return self.precoders()
        scale = np.sqrt(total_power / (self.n_subcarriers * self.n_streams))
        return scale * self.precoders()

    def validate(self) -> None:
        """
        Check support, unit modulus and per-subcarrier power.

        Raises:
            SolverError: If any constraint is broken
        """
        allowed = self.mask.allowed
        if np.any(self.analog[~allowed] != 0):
            raise SolverError("Analog matrix has entries outside its connectivity mask")
        if not np.allclose(np.abs(self.analog[allowed]), 1.0, rtol=0.0, atol=UNIT_MODULUS_TOL):
            raise SolverError("Analog matrix is not unit modulus on its support")
        if self.n_streams:
            power = np.sum(np.abs(self.precoders()) ** 2, axis=(1, 2))
            if not np.allclose(power, self.n_streams, rtol=POWER_TOL, atol=0.0):
                raise SolverError(
                    f"Precoder power {power.min():.6g}..{power.max():.6g} differs from {self.n_streams} streams"
                )


def normalize_digital(analog: np.ndarray, digital: np.ndarray) -> np.ndarray:
    """
    Scale every subcarrier's digital precoder so that ||F_RF F_BB[k]||_F^2 = Ns.

    Subcarriers whose composite precoder vanishes are left at zero and make
    validation fail downstream.
    """
    n_streams = digital.shape[2]
    composite = np.einsum('nr,krs->kns', analog, digital)
    norms = np.sqrt(np.sum(np.abs(composite) ** 2, axis=(1, 2)))
    scale = np.where(norms > 0, np.sqrt(n_streams) / np.where(norms > 0, norms, 1.0), 0.0)
    return digital * scale[:, np.newaxis, np.newaxis]


def unit_phase(values: np.ndarray) -> np.ndarray:
    """exp(j arg(values)), with arg(0) taken as 0."""
    return np.exp(1j * np.angle(values))
