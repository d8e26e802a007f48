"""
RF-chain to antenna wiring of the hybrid architectures.

Antennas are grouped into contiguous, equally sized subarrays: antenna a
belongs to subarray a // (N / n_subarrays). This matches the element order of
build_upa + split_subarrays and of partition_wsms.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..utils.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

FC = 'fc'
AOSA = 'aosa'
WSMS = 'wsms'
DAOSA = 'daosa'
ARCHITECTURES = (FC, AOSA, WSMS, DAOSA)


@dataclass(frozen=True, eq=False)
class ConnectivityMask:
    """
    Which antenna may be driven by which RF chain.

    Attributes:
        allowed: (N, N_RF) boolean matrix
    """
    allowed: np.ndarray

    def __post_init__(self):
        allowed = np.array(self.allowed, dtype=bool)
        if allowed.ndim != 2:
            raise InvalidArgumentError(f"Mask must be a 2D matrix, got shape {allowed.shape}")
        allowed.setflags(write=False)
        object.__setattr__(self, 'allowed', allowed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConnectivityMask):
            return NotImplemented
        return np.array_equal(self.allowed, other.allowed)

    __hash__ = None

    @property
    def n_antennas(self) -> int:
        return self.allowed.shape[0]

    @property
    def n_rf(self) -> int:
        return self.allowed.shape[1]

    @property
    def is_full(self) -> bool:
        return bool(self.allowed.all())

    def dark_antennas(self) -> np.ndarray:
        """Antennas no RF chain can reach."""
        return np.flatnonzero(~self.allowed.any(axis=1))

    def count(self) -> int:
        return int(self.allowed.sum())


@dataclass(frozen=True, eq=False)
class SwitchNetwork:
    """
    Switch states between RF chains and subarrays of a DAoSA array.

    Attributes:
        closed: (N_RF, n_subarrays) boolean matrix, True = switch closed
        allow_dark: Accept subarrays without any closed switch
    """
    closed: np.ndarray
    allow_dark: bool = False

    def __post_init__(self):
        closed = np.array(self.closed, dtype=bool)
        if closed.ndim != 2 or 0 in closed.shape:
            raise InvalidArgumentError(f"Switch matrix must be a non-empty 2D matrix, got shape {closed.shape}")
        idle_chains = np.flatnonzero(~closed.any(axis=1))
        if idle_chains.size:
            raise InvalidArgumentError(f"RF chain(s) {idle_chains.tolist()} have no closed switch")
        dark = np.flatnonzero(~closed.any(axis=0))
        if dark.size and not self.allow_dark:
            raise InvalidArgumentError(f"Subarray(s) {dark.tolist()} have no closed switch")
        closed.setflags(write=False)
        object.__setattr__(self, 'closed', closed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SwitchNetwork):
            return NotImplemented
        return np.array_equal(self.closed, other.closed)

    __hash__ = None

    @classmethod
    def all_closed(cls, n_rf: int, n_subarrays: int) -> "SwitchNetwork":
        return cls(np.ones((n_rf, n_subarrays), dtype=bool))

    @classmethod
    def identity(cls, n_rf: int) -> "SwitchNetwork":
        """Chain r closed onto subarray r only, the AoSA wiring."""
        return cls(np.eye(n_rf, dtype=bool))

    @property
    def n_rf(self) -> int:
        return self.closed.shape[0]

    @property
    def n_subarrays(self) -> int:
        return self.closed.shape[1]

    @property
    def closed_count(self) -> int:
        return int(self.closed.sum())

    def open_switches(self):
        """(chain, subarray) pairs whose switch is open, in row-major order."""
        return [tuple(int(i) for i in idx) for idx in np.argwhere(~self.closed)]

    def with_closed(self, rf_chain: int, subarray: int) -> "SwitchNetwork":
        closed = self.closed.copy()
        closed[rf_chain, subarray] = True
        return SwitchNetwork(closed, allow_dark=self.allow_dark)


@dataclass(frozen=True)
class DeviceCensus:
    """Hardware counts that drive power consumption."""
    phase_devices_total: int
    phase_devices_active: int
    switches_total: int
    switches_closed: int
    rf_chains: int
    power_amplifiers: int
    device_kind: str = 'phase_shifter'

    def to_dict(self) -> Dict[str, int]:
        return {
            'phase_devices_total': self.phase_devices_total,
            'phase_devices_active': self.phase_devices_active,
            'switches_total': self.switches_total,
            'switches_closed': self.switches_closed,
            'rf_chains': self.rf_chains,
            'power_amplifiers': self.power_amplifiers,
        }


def subarray_of_antennas(n_antennas: int, n_subarrays: int) -> np.ndarray:
    """Subarray id of every antenna under the contiguous block partition."""
    if n_subarrays < 1 or n_antennas % n_subarrays:
        raise InvalidArgumentError(
            f"{n_antennas} antennas cannot be split into {n_subarrays} equal subarrays"
        )
    return np.repeat(np.arange(n_subarrays), n_antennas // n_subarrays)


def wsms_chain_assignment(n_rf: int, n_subarrays: int) -> np.ndarray:
    """Subarray served by each RF chain of a WSMS array (round-robin)."""
    return np.arange(n_rf) % n_subarrays


def _check_counts(arch: str, n_antennas: int, n_rf: int, n_subarrays: int) -> None:
    if arch not in ARCHITECTURES:
        raise InvalidArgumentError(f"Unknown architecture '{arch}', expected one of {ARCHITECTURES}")
    if n_antennas < 1 or n_rf < 1 or n_subarrays < 1:
        raise InvalidArgumentError("Antenna, RF chain and subarray counts must be positive")
    if n_antennas % n_subarrays:
        raise InvalidArgumentError(f"{n_antennas} antennas cannot be split into {n_subarrays} subarrays")
    if arch == AOSA and n_rf != n_subarrays:
        raise InvalidArgumentError(f"AoSA needs one RF chain per subarray, got {n_rf} chains, {n_subarrays} subarrays")
    if arch == WSMS and n_rf < n_subarrays:
        raise InvalidArgumentError(f"WSMS needs at least one RF chain per subarray, got {n_rf} < {n_subarrays}")


def _check_switches(switches: Optional[SwitchNetwork], n_rf: int, n_subarrays: int) -> SwitchNetwork:
    if switches is None:
        raise InvalidArgumentError("DAoSA needs a switch network")
    if switches.closed.shape != (n_rf, n_subarrays):
        raise InvalidArgumentError(
            f"Switch network {switches.closed.shape} does not match {n_rf} chains x {n_subarrays} subarrays"
        )
    return switches


def connectivity(arch: str,
                 n_antennas: int,
                 n_rf: int,
                 n_subarrays: int = 1,
                 switches: Optional[SwitchNetwork] = None) -> ConnectivityMask:
    """
    Connectivity mask of an architecture.

    Args:
        arch: 'fc', 'aosa', 'wsms' or 'daosa'
        n_antennas: Antenna count N
        n_rf: RF chain count
        n_subarrays: Subarray count (ignored by fc)
        switches: Switch network, required for daosa

    Returns:
        ConnectivityMask of shape (N, N_RF)
    """
    if arch == FC:
        _check_counts(arch, n_antennas, n_rf, 1)
        return ConnectivityMask(np.ones((n_antennas, n_rf), dtype=bool))

    _check_counts(arch, n_antennas, n_rf, n_subarrays)
    owner = subarray_of_antennas(n_antennas, n_subarrays)

    if arch == AOSA:
        chain_subarray = np.arange(n_rf)
        allowed = owner[:, np.newaxis] == chain_subarray[np.newaxis, :]
    elif arch == WSMS:
        chain_subarray = wsms_chain_assignment(n_rf, n_subarrays)
        allowed = owner[:, np.newaxis] == chain_subarray[np.newaxis, :]
    else:
        network = _check_switches(switches, n_rf, n_subarrays)
        allowed = network.closed.T[owner]

    return ConnectivityMask(allowed)


def device_census(arch: str,
                  n_antennas: int,
                  n_rf: int,
                  n_subarrays: int = 1,
                  switches: Optional[SwitchNetwork] = None,
                  device_kind: str = 'phase_shifter') -> DeviceCensus:
    """
    Count the hardware an architecture needs.

    DAoSA provisions one phase-device bank per (chain, subarray) pair; only
    banks behind a closed switch are active.
    """
    n_sub = 1 if arch == FC else n_subarrays
    _check_counts(arch, n_antennas, n_rf, n_sub)
    per_subarray = n_antennas // n_sub

    switches_total = 0
    switches_closed = 0
    if arch == FC:
        total = active = n_antennas * n_rf
    elif arch == AOSA:
        total = active = n_antennas
    elif arch == WSMS:
        total = active = per_subarray * n_rf
    else:
        network = _check_switches(switches, n_rf, n_sub)
        total = n_antennas * n_rf
        active = network.closed_count * per_subarray
        switches_total = n_rf * n_sub
        switches_closed = network.closed_count

    return DeviceCensus(
        phase_devices_total=total,
        phase_devices_active=active,
        switches_total=switches_total,
        switches_closed=switches_closed,
        rf_chains=n_rf,
        power_amplifiers=n_antennas,
        device_kind=device_kind,
    )
