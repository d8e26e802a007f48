"""
Dynamic array-of-subarrays: alternating selection of the switch network and
the hybrid beamformer.

The outer loop is greedy. It starts from a one-switch-per-chain AoSA wiring
and closes, one at a time, the switch whose induced mask gives the highest
rate after an EBE alternating-minimization solve.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import List, Optional, Tuple

import numpy as np

from ..architectures.beamformer import HybridBeamformer
from ..architectures.connectivity import DAOSA, SwitchNetwork, connectivity, device_census
from ..channel.channel_builder import Channel
from ..utils.exceptions import InvalidArgumentError
from ..utils.metrics import PowerModel, RatePowerPoint, power_consumption
from .altmin import DEFAULT_MAX_ITER, DEFAULT_TOL, altmin_hybrid
from .fully_digital import effective_rate, fully_digital_baseline, refine_digital
from .sic import aosa_partition

logger = logging.getLogger(__name__)

CLOSED_COUNT = 'closed_count'
MIN_POWER_FOR_RATE = 'min_power_for_rate'
MAX_ENERGY_EFFICIENCY = 'max_energy_efficiency'
BUDGET_KINDS = (CLOSED_COUNT, MIN_POWER_FOR_RATE, MAX_ENERGY_EFFICIENCY)


@dataclass(frozen=True)
class Budget:
    """
    Stopping rule of the switch selection.

    Attributes:
        kind: 'closed_count', 'min_power_for_rate' or 'max_energy_efficiency'
        value: Closed switch count, or the rate target in bits/s
    """
    kind: str
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind not in BUDGET_KINDS:
            raise InvalidArgumentError(f"Unknown budget kind '{self.kind}'")
        if self.kind != MAX_ENERGY_EFFICIENCY and self.value is None:
            raise InvalidArgumentError(f"Budget '{self.kind}' needs a value")


@dataclass(eq=False)
class SwitchSelection:
    """
    Result of the switch selection.

    Attributes:
        switches: Chosen switch network
        beamformer: Hybrid beamformer on the induced mask (digital stage refined)
        trace: Operating point after every closure, starting from the AoSA wiring
        feasible: False when a rate target was not reached even fully connected
    """
    switches: SwitchNetwork
    beamformer: HybridBeamformer
    trace: List[RatePowerPoint] = field(default_factory=list)
    feasible: bool = True


@dataclass(eq=False)
class _Candidate:
    switches: SwitchNetwork
    beamformer: HybridBeamformer
    rate: float


class DaosaSelector:
    """Evaluates switch networks of one DAoSA link."""

    def __init__(self,
                 channel: Channel,
                 n_rf: int,
                 n_subarrays: int,
                 power_model: PowerModel,
                 total_power: float,
                 noise: float,
                 max_streams: Optional[int] = None,
                 max_iter: int = DEFAULT_MAX_ITER,
                 tol: float = DEFAULT_TOL):
        if n_rf < 1 or n_subarrays < 1:
            raise InvalidArgumentError("RF chain and subarray counts must be positive")
        aosa_partition(channel, n_subarrays)
        self.channel = channel
        self.n_rf = n_rf
        self.n_subarrays = n_subarrays
        self.power_model = power_model
        self.total_power = total_power
        self.noise = noise
        self.max_streams = n_rf if max_streams is None else min(max_streams, n_rf)
        self.max_iter = max_iter
        self.tol = tol
        self.allow_dark = n_rf < n_subarrays
        baseline = fully_digital_baseline(channel, total_power, noise, self.max_streams)
        self.target = baseline.target()

    def power(self, switches: SwitchNetwork) -> float:
        census = device_census(DAOSA, self.channel.n_tx, self.n_rf, self.n_subarrays, switches)
        return power_consumption(census, self.power_model)

    def point(self, candidate: _Candidate) -> RatePowerPoint:
        return RatePowerPoint(
            rate=candidate.rate,
            power=self.power(candidate.switches),
            architecture=DAOSA,
            closed_switches=candidate.switches.closed_count,
        )

    def solve(self, switches: SwitchNetwork, warm_start: Optional[np.ndarray] = None) -> _Candidate:
        """Solve the beamformer of one switch network and rate it."""
        mask = connectivity(DAOSA, self.channel.n_tx, self.n_rf, self.n_subarrays, switches)
        solved = altmin_hybrid(
            self.target, mask, self.n_rf,
            max_iter=self.max_iter, tol=self.tol,
            initial_analog_matrix=warm_start,
            allow_dark=switches.allow_dark,
        )
        solved.switches = switches
        rate = effective_rate(self.channel, solved, self.total_power, self.noise, self.max_streams)
        return _Candidate(switches, solved, rate)

    def initial(self) -> _Candidate:
        """
        One closed switch per chain.

        With fewer chains than subarrays every assignment of chains to
        subarrays is tried, up to chain relabeling, so two chains may share
        a subarray. With more, chains are dealt round-robin.
        """
        if self.n_rf == self.n_subarrays:
            return self.solve(SwitchNetwork.identity(self.n_rf))

        if self.n_rf > self.n_subarrays:
            closed = np.zeros((self.n_rf, self.n_subarrays), dtype=bool)
            closed[np.arange(self.n_rf), np.arange(self.n_rf) % self.n_subarrays] = True
            return self.solve(SwitchNetwork(closed))

        best = None
        for subset in combinations_with_replacement(range(self.n_subarrays), self.n_rf):
            closed = np.zeros((self.n_rf, self.n_subarrays), dtype=bool)
            closed[np.arange(self.n_rf), list(subset)] = True
            candidate = self.solve(SwitchNetwork(closed, allow_dark=True))
            if best is None or candidate.rate > best.rate:
                best = candidate
        return best

    def grow(self, incumbent: _Candidate) -> _Candidate:
        """
        Best network with one more closed switch; cold and warm solves are both tried.

        The rate never drops: when no solve on the grown network beats the
        incumbent, the switch is closed and the incumbent's precoders and
        rate are carried forward.
        """
        full = incumbent.switches.closed_count + 1 == self.n_rf * self.n_subarrays
        best = None
        for chain, subarray in incumbent.switches.open_switches():
            switches = incumbent.switches.with_closed(chain, subarray)
            options = [self.solve(switches)]
            if not full:
                # the fully closed network is solved exactly as the FC architecture
                options.append(self.solve(switches, warm_start=incumbent.beamformer.analog))
            for candidate in options:
                if best is None or candidate.rate > best.rate:
                    best = candidate
        if best.rate < incumbent.rate:
            logger.debug(f"No solve with {best.switches.closed_count} closed beats "
                         f"{incumbent.rate / 1e9:.3f} Gbps, keeping the incumbent precoders")
            return _Candidate(best.switches, incumbent.beamformer, incumbent.rate)
        return best


def daosa_select(channel: Channel,
                 n_rf: int,
                 n_subarrays: int,
                 budget: Budget,
                 power_model: PowerModel,
                 total_power: float,
                 noise: float,
                 max_streams: Optional[int] = None,
                 max_iter: int = DEFAULT_MAX_ITER,
                 tol: float = DEFAULT_TOL) -> SwitchSelection:
    """
    Greedy switch selection for a DAoSA transmitter.

    Args:
        channel: Channel whose TX array is split into n_subarrays subarrays
        n_rf: RF chain count
        n_subarrays: Subarray count
        budget: Closed-switch count, rate target, or energy-efficiency objective
        power_model: Device power draw used for the trace
        total_power: Transmit power in watts
        noise: Noise power per subcarrier in watts
        max_streams: Stream cap, defaults to n_rf

    Returns:
        SwitchSelection with the chosen network, its beamformer and the trace
    """
    total_switches = n_rf * n_subarrays
    if budget.kind == CLOSED_COUNT:
        count = int(budget.value)
        if count != budget.value or not n_rf <= count <= total_switches:
            raise InvalidArgumentError(
                f"Closed switch count must be an integer in [{n_rf}, {total_switches}], got {budget.value}"
            )
        stop_at = count
    else:
        stop_at = total_switches

    selector = DaosaSelector(channel, n_rf, n_subarrays, power_model, total_power, noise,
                             max_streams, max_iter, tol)
    current = selector.initial()
    visited: List[Tuple[_Candidate, RatePowerPoint]] = [(current, selector.point(current))]
    logger.info(f"DAoSA start: {current.switches.closed_count} closed, rate {current.rate / 1e9:.3f} Gbps")

    feasible = True
    while current.switches.closed_count < stop_at:
        if budget.kind == MIN_POWER_FOR_RATE and current.rate >= budget.value:
            break
        current = selector.grow(current)
        visited.append((current, selector.point(current)))
        logger.debug(
            f"DAoSA closed {current.switches.closed_count}: rate {current.rate / 1e9:.3f} Gbps, "
            f"power {visited[-1][1].power:.3f} W"
        )

    chosen = current
    if budget.kind == MIN_POWER_FOR_RATE and current.rate < budget.value:
        feasible = False
        logger.warning(
            f"Rate target {budget.value / 1e9:.3f} Gbps not reachable, best effort "
            f"{current.rate / 1e9:.3f} Gbps fully connected"
        )
    elif budget.kind == MAX_ENERGY_EFFICIENCY:
        chosen = max(visited, key=lambda item: item[1].energy_efficiency)[0]

    return SwitchSelection(
        switches=chosen.switches,
        beamformer=refine_digital(channel, chosen.beamformer, total_power, noise, selector.max_streams),
        trace=[point for _, point in visited],
        feasible=feasible,
    )
