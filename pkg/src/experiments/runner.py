"""
Configuration-driven sweeps behind the CLI subcommands.

Every runner takes a validated ScenarioConfig and returns a SweepResult with
one row per sweep point. A point that fails with a solver or argument error
is flagged and the sweep continues.
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.constants import speed_of_light

from ..algorithms import (
    CLOSED_COUNT,
    Budget,
    altmin_hybrid,
    build_codebook,
    build_dictionary,
    daosa_select,
    dictionary_directions,
    effective_rate,
    fully_digital_baseline,
    omp_hybrid,
    refine_digital,
    sic_aosa,
    ttd_codebook_select,
    wsms_solve,
)
from ..architectures import (
    AOSA,
    DAOSA,
    FC,
    PHASE_SHIFTER,
    TTD,
    WSMS,
    HybridBeamformer,
    SwitchNetwork,
    connectivity,
    device_census,
)
from ..channel import (
    SPHERICAL,
    Channel,
    PathSet,
    assemble_channel,
    build_two_path_scenario,
    numerical_rank,
    subcarrier_grid,
)
from ..config.settings import ScenarioConfig
from ..geometry import (
    ArrayGeometry,
    Direction,
    build_upa,
    partition_wsms,
    rank_optimal_separation,
    rayleigh_distance,
    split_subarrays,
)
from ..utils.exceptions import InvalidArgumentError, SolverError
from ..utils.metrics import (
    array_gain_sweep,
    data_rate,
    dbm_to_watts,
    energy_efficiency,
    noise_power,
    power_consumption,
    spectral_efficiency,
)
from .results import SweepResult

logger = logging.getLogger(__name__)

POINT_ERRORS = (SolverError, InvalidArgumentError, np.linalg.LinAlgError)

RATE_UNITS = {
    'transmit_power_dbm': 'dBm',
    'rate': 'bit/s',
    'fully_digital_rate': 'bit/s',
    'spectral_efficiency': 'bit/s/Hz',
    'power': 'W',
    'energy_efficiency': 'bit/J',
}
RATE_ORDERING = ((WSMS, FC), (FC, AOSA))


def gain_unit(convention: str) -> str:
    """Unit label of a gain column, naming the power or amplitude scale."""
    return f"dB ({convention})"


def _result(command: str, config: ScenarioConfig, units: Dict[str, str]) -> SweepResult:
    return SweepResult(command, config.config_hash, config.algorithm.seed, units)


def build_paths(config: ScenarioConfig) -> PathSet:
    """The backhaul scene: LoS plus ground bounce, or LoS only for n_paths = 1."""
    channel = config.channel
    paths = build_two_path_scenario(channel.distance, channel.height, channel.reflection_loss_db)
    if channel.n_paths == 1:
        paths = PathSet(paths.paths[:1], rx_offset=paths.rx_offset)
    if channel.blocked_los:
        paths = paths.without_los()
    return paths


def build_arrays(config: ScenarioConfig,
                 architecture: str,
                 n_subarrays: int) -> Tuple[ArrayGeometry, ArrayGeometry]:
    """
    TX and RX geometries for an architecture.

    FC, AoSA and DAoSA split one UPA; WSMS spreads k copies of a UPA with
    n_x / k columns so the antenna count does not change. Both link ends
    use the same layout.
    """
    geometry = config.geometry
    f_c = config.channel.carrier_frequency
    if architecture == WSMS:
        if geometry.n_x % n_subarrays:
            raise InvalidArgumentError(f"{geometry.n_x} array columns cannot form {n_subarrays} WSMS subarrays")
        base = build_upa(geometry.n_x // n_subarrays, geometry.n_y, geometry.spacing, f_c)
        separation = geometry.wsms_separation
        if separation is None:
            separation = rank_optimal_separation(base.wavelength, config.channel.distance, n_subarrays)
        array = partition_wsms(base, n_subarrays, separation)
        return array, array

    array = build_upa(geometry.n_x, geometry.n_y, geometry.spacing, f_c)
    if architecture in (AOSA, DAOSA):
        return split_subarrays(array, n_subarrays), array
    return array, array


def build_channel(config: ScenarioConfig,
                  architecture: str,
                  n_subarrays: int = 1,
                  mode: Optional[str] = None) -> Channel:
    """Channel of the configured scene; WSMS defaults to spherical propagation."""
    tx, rx = build_arrays(config, architecture, n_subarrays)
    if mode is None:
        mode = SPHERICAL if architecture == WSMS else config.channel.propagation_mode
    channel = config.channel
    return assemble_channel(
        build_paths(config), tx, rx,
        channel.carrier_frequency, channel.bandwidth, channel.n_subcarriers,
        mode=mode, granularity=channel.spherical_granularity,
    )


def link_budget(config: ScenarioConfig, transmit_power_dbm: float) -> Tuple[float, float]:
    """(total transmit power, noise power per subcarrier) in watts."""
    channel = config.channel
    noise = noise_power(channel.bandwidth, channel.n_subcarriers, config.radio.noise_figure_db)
    return dbm_to_watts(transmit_power_dbm), noise


def _stream_cap(config: ScenarioConfig, n_rf: int) -> int:
    cap = config.radio.max_streams
    return n_rf if cap is None else min(cap, n_rf)


def solve_architecture(config: ScenarioConfig,
                       channel: Channel,
                       architecture: str,
                       n_rf: int,
                       n_subarrays: int,
                       total_power: float,
                       noise: float) -> HybridBeamformer:
    """Run the solver of an architecture and return its beamformer with a waterfilled digital stage."""
    algorithm = config.algorithm
    streams = _stream_cap(config, n_rf)

    if architecture == AOSA:
        return sic_aosa(channel, n_rf, total_power, noise, streams)

    if architecture == WSMS:
        solved = wsms_solve(channel, n_subarrays, n_rf, total_power, noise, streams,
                            max_iter=algorithm.max_iter, tol=algorithm.tol)
        return refine_digital(channel, solved, total_power, noise, streams, algorithm.rank_threshold)

    if architecture != FC:
        raise InvalidArgumentError(f"No single-shot solver for architecture '{architecture}'")

    target = fully_digital_baseline(channel, total_power, noise, streams, algorithm.rank_threshold).target()
    mask = connectivity(FC, channel.n_tx, n_rf)
    if algorithm.fc_solver == 'omp':
        dictionary = build_dictionary(channel.tx_geom, channel.center_frequency,
                                      algorithm.dictionary_azimuth, algorithm.dictionary_elevation)
        solved = omp_hybrid(target, dictionary, mask, n_rf)
    else:
        solved = altmin_hybrid(target, mask, n_rf, max_iter=algorithm.max_iter, tol=algorithm.tol)
    return refine_digital(channel, solved, total_power, noise, streams, algorithm.rank_threshold)


def _hybrid_point(config: ScenarioConfig,
                  channel: Channel,
                  architecture: str,
                  n_rf: int,
                  n_subarrays: int,
                  transmit_power_dbm: float) -> Dict[str, float]:
    total_power, noise = link_budget(config, transmit_power_dbm)
    beamformer = solve_architecture(config, channel, architecture, n_rf, n_subarrays, total_power, noise)
    se = spectral_efficiency(channel, beamformer, noise, total_power)
    rate = data_rate(se, channel.bandwidth)

    baseline = fully_digital_baseline(channel, total_power, noise, _stream_cap(config, n_rf),
                                      config.algorithm.rank_threshold)
    if rate > baseline.achievable_rate * (1.0 + 1e-9):
        raise SolverError(
            f"{architecture} rate {rate:.6g} exceeds the fully-digital bound {baseline.achievable_rate:.6g}"
        )

    census = device_census(architecture, channel.n_tx, n_rf, n_subarrays)
    power = power_consumption(census, config.power_model)
    return {
        'rate': rate,
        'spectral_efficiency': se,
        'n_streams': beamformer.n_streams,
        'fully_digital_rate': baseline.achievable_rate,
        'power': power,
        'energy_efficiency': energy_efficiency(rate, power),
    }


def ordering_violations(rates: Dict[str, float]) -> List[Tuple[str, str]]:
    """
    Pairs of RATE_ORDERING whose first architecture does not strictly beat the second.

    Pairs with an architecture missing from rates are skipped.
    """
    return [(high, low) for high, low in RATE_ORDERING
            if high in rates and low in rates and not rates[high] > rates[low]]


def run_rate_vs_power(config: ScenarioConfig) -> SweepResult:
    """
    Achievable rate of FC, AoSA and WSMS over transmit power.

    FC and AoSA see the configured propagation mode; WSMS sees spherical
    wavefronts, which is where its extra streams come from. With
    rate_vs_power.check_ordering set, every power point must rank
    WSMS > FC > AoSA; rows of a pair that breaks it are flagged with their
    values kept.
    """
    sweep = config.rate_vs_power
    result = _result('rate-vs-power', config, RATE_UNITS)
    if config.channel.n_subcarriers != 1:
        logger.warning(f"rate-vs-power runs on {config.channel.n_subcarriers} subcarriers, the reference setup is narrowband")

    subarrays = {FC: 1, AOSA: sweep.n_rf, WSMS: sweep.wsms_subarrays}
    channels: Dict[str, Channel] = {}
    for architecture in sweep.architectures:
        try:
            channels[architecture] = build_channel(config, architecture, subarrays[architecture])
        except POINT_ERRORS as e:
            logger.error(f"Cannot build the {architecture} channel: {e}")

    for p_dbm in sweep.power_dbm:
        solved: Dict[str, Dict[str, float]] = {}
        for architecture in sweep.architectures:
            point = {'transmit_power_dbm': p_dbm, 'architecture': architecture}
            if architecture not in channels:
                result.add_flagged("channel could not be built", **point)
                continue
            try:
                solved[architecture] = _hybrid_point(config, channels[architecture], architecture,
                                                     sweep.n_rf, subarrays[architecture], p_dbm)
            except POINT_ERRORS as e:
                result.add_flagged(str(e), **point)

        broken: Dict[str, str] = {}
        if sweep.check_ordering:
            rates = {architecture: values['rate'] for architecture, values in solved.items()}
            for high, low in ordering_violations(rates):
                message = f"{high} rate {rates[high]:.6g} does not exceed {low} rate {rates[low]:.6g}"
                for architecture in (high, low):
                    broken[architecture] = '; '.join(filter(None, (broken.get(architecture), message)))

        for architecture, values in solved.items():
            point = {'transmit_power_dbm': p_dbm, 'architecture': architecture}
            if architecture in broken:
                result.add_flagged(broken[architecture], **point, **values)
                continue
            result.add_row(**point, **values)
            logger.info(f"{architecture} at {p_dbm:g} dBm: {values['rate'] / 1e9:.2f} Gbps, "
                        f"{values['n_streams']} stream(s)")
    return result


def run_daosa_tradeoff(config: ScenarioConfig) -> SweepResult:
    """
    Rate and consumed power of DAoSA for every closed-switch count.

    With as many chains as subarrays the first row is the AoSA wiring and
    the last the fully-connected one; both must reach the rate of direct
    AoSA and FC solves of the same channel.
    """
    sweep = config.daosa_tradeoff
    algorithm = config.algorithm
    result = _result('daosa-tradeoff', config, RATE_UNITS)
    total_power, noise = link_budget(config, sweep.transmit_power_dbm)
    streams = _stream_cap(config, sweep.n_rf)
    all_switches = sweep.n_rf * sweep.n_subarrays

    try:
        channel = build_channel(config, DAOSA, sweep.n_subarrays)
        selection = daosa_select(
            channel, sweep.n_rf, sweep.n_subarrays, Budget(CLOSED_COUNT, all_switches),
            config.power_model, total_power, noise, streams,
            max_iter=algorithm.max_iter, tol=algorithm.tol,
        )
    except POINT_ERRORS as e:
        for closed in range(sweep.n_rf, all_switches + 1):
            result.add_flagged(str(e), closed_switches=closed, transmit_power_dbm=sweep.transmit_power_dbm)
        return result

    references = {}
    if sweep.n_rf == sweep.n_subarrays:
        target = fully_digital_baseline(channel, total_power, noise, streams).target()
        for architecture, switches in ((AOSA, SwitchNetwork.identity(sweep.n_rf)),
                                       (FC, SwitchNetwork.all_closed(sweep.n_rf, sweep.n_subarrays))):
            mask = connectivity(DAOSA, channel.n_tx, sweep.n_rf, sweep.n_subarrays, switches)
            reference = altmin_hybrid(target, mask, sweep.n_rf, max_iter=algorithm.max_iter, tol=algorithm.tol)
            references[switches.closed_count] = (
                architecture, effective_rate(channel, reference, total_power, noise, streams)
            )

    for point in selection.trace:
        label = DAOSA
        row = {
            'closed_switches': point.closed_switches,
            'transmit_power_dbm': sweep.transmit_power_dbm,
            'rate': point.rate,
            'power': point.power,
            'energy_efficiency': point.energy_efficiency,
        }
        if point.closed_switches in references:
            label, reference_rate = references[point.closed_switches]
            if point.rate < reference_rate - 1e-6 * max(reference_rate, 1.0):
                result.add_flagged(
                    f"endpoint rate {point.rate:.9g} falls short of the {label} run {reference_rate:.9g}",
                    architecture=label, **row,
                )
                continue
        result.add_row(architecture=label, **row)
        logger.info(f"DAoSA {point.closed_switches} closed: {point.rate / 1e9:.2f} Gbps, {point.power:.2f} W")
    return result


def _band_target(section, f_c: float, bandwidth: float) -> Tuple[Tuple[float, float, int], Direction]:
    band = (f_c, bandwidth, section.n_subcarriers)
    return band, Direction.from_degrees(section.azimuth_deg, section.elevation_deg)


def _gain_array(config: ScenarioConfig) -> ArrayGeometry:
    geometry = config.geometry
    return build_upa(geometry.n_x, geometry.n_y, geometry.spacing, config.channel.carrier_frequency)


def run_array_gain(config: ScenarioConfig) -> SweepResult:
    """
    Per-subcarrier gain of phase-shifter and TTD beams steered at one direction.

    Gains follow array_gain.convention and the column units name it: with the
    default amplitude scale a loss reads half the dB it would on the power scale.
    """
    section = config.array_gain
    unit = gain_unit(section.convention)
    result = _result('array-gain', config, {'frequency': 'Hz', 'ps_gain_db': unit, 'ttd_gain_db': unit})
    f_c = config.channel.carrier_frequency
    band, target = _band_target(section, f_c, section.bandwidth)
    array = _gain_array(config)

    ps_entry = build_codebook(array, [target], PHASE_SHIFTER, f_c)[0]
    ttd_entry = build_codebook(array, [target], TTD, f_c)[0]
    ps_gains = array_gain_sweep(array, ps_entry, target, band, convention=section.convention)
    ttd_gains = array_gain_sweep(array, ttd_entry, target, band, convention=section.convention)

    for k, f in enumerate(subcarrier_grid(*band)):
        result.add_row(subcarrier=k, frequency=float(f),
                       ps_gain_db=float(ps_gains[k]), ttd_gain_db=float(ttd_gains[k]))
    logger.info(f"Array gain: PS worst loss {-ps_gains.min():.3f} dB, "
                f"TTD spread {np.ptp(ttd_gains):.3g} dB")
    return result


def run_ttd_resolution(config: ScenarioConfig) -> SweepResult:
    """Residual squint of quantized TTD beams versus delay resolution."""
    section = config.ttd_resolution
    unit = gain_unit(section.convention)
    result = _result('ttd-resolution', config, {'ttd_worst_loss_db': unit, 'ttd_gain_spread_db': unit,
                                                'ps_worst_loss_db': unit})
    f_c = config.channel.carrier_frequency
    band, target = _band_target(section, f_c, section.bandwidth)
    array = _gain_array(config)

    ps_entry = build_codebook(array, [target], PHASE_SHIFTER, f_c)[0]
    ps_worst = -float(array_gain_sweep(array, ps_entry, target, band, convention=section.convention).min())
    for bits in section.bits:
        try:
            entry = build_codebook(array, [target], TTD, f_c, ttd_bits=bits)[0]
            gains = array_gain_sweep(array, entry, target, band, convention=section.convention)
        except POINT_ERRORS as e:
            result.add_flagged(str(e), bits=bits)
            continue
        result.add_row(bits=bits, ttd_worst_loss_db=-float(gains.min()),
                       ttd_gain_spread_db=float(np.ptp(gains)), ps_worst_loss_db=ps_worst)
        logger.info(f"TTD {bits} bit(s): worst loss {-gains.min():.3f} dB")
    return result


def run_squint_vs_bandwidth(config: ScenarioConfig) -> SweepResult:
    """
    Worst-subcarrier loss of phase-shifter and TTD beams over fractional bandwidth.

    Besides the beam steered straight at the target, the best phase-shifter
    beam of the dictionary grid is reported: a slightly mispointed beam can
    trade center gain for a better band edge.
    """
    section = config.squint_vs_bandwidth
    algorithm = config.algorithm
    unit = gain_unit(section.convention)
    result = _result('squint-vs-bandwidth', config, {
        'bandwidth': 'Hz', 'ps_worst_loss_db': unit, 'ps_best_grid_loss_db': unit, 'ttd_worst_loss_db': unit
    })
    f_c = config.channel.carrier_frequency
    array = _gain_array(config)
    target = Direction.from_degrees(section.azimuth_deg, section.elevation_deg)
    grid = [target] + dictionary_directions(algorithm.dictionary_azimuth, algorithm.dictionary_elevation)

    ps_entry = build_codebook(array, [target], PHASE_SHIFTER, f_c)[0]
    ttd_entry = build_codebook(array, [target], TTD, f_c)[0]
    for fraction in section.fractional_bandwidths:
        band = (f_c, fraction * f_c, section.n_subcarriers)
        try:
            ps = array_gain_sweep(array, ps_entry, target, band, convention=section.convention)
            ttd = array_gain_sweep(array, ttd_entry, target, band, convention=section.convention)
            _, best = ttd_codebook_select(array, band, grid, PHASE_SHIFTER, target,
                                          convention=section.convention)
        except POINT_ERRORS as e:
            result.add_flagged(str(e), fractional_bandwidth=fraction)
            continue
        result.add_row(fractional_bandwidth=fraction, bandwidth=fraction * f_c,
                       ps_worst_loss_db=-float(ps.min()), ps_best_grid_loss_db=-float(best.min()),
                       ttd_worst_loss_db=-float(ttd.min()))
        logger.info(f"Fractional bandwidth {fraction:g}: PS worst loss {-ps.min():.3f} dB")
    return result


def run_wsms_subarrays(config: ScenarioConfig) -> SweepResult:
    """Multiplexing gain against array gain of WSMS for several subarray counts."""
    sweep = config.wsms_subarrays
    result = _result('wsms-subarrays', config, RATE_UNITS)
    for k in sweep.k_values:
        point = {'k_subarrays': k, 'transmit_power_dbm': sweep.transmit_power_dbm}
        try:
            channel = build_channel(config, WSMS, k)
            rank = max(numerical_rank(h, config.algorithm.rank_threshold) for h in channel.matrices)
            values = _hybrid_point(config, channel, WSMS, sweep.n_rf, k, sweep.transmit_power_dbm)
        except POINT_ERRORS as e:
            result.add_flagged(str(e), **point)
            continue
        result.add_row(**point, channel_rank=rank, **values)
        logger.info(f"WSMS k={k}: rank {rank}, {values['rate'] / 1e9:.2f} Gbps")
    return result


def run_rayleigh(config: ScenarioConfig) -> SweepResult:
    """Rayleigh distance of one aperture at several frequencies."""
    section = config.rayleigh
    result = _result('rayleigh', config, {'aperture': 'm', 'frequency': 'Hz', 'wavelength': 'm',
                                          'rayleigh_distance': 'm'})
    for f in section.frequencies:
        wavelength = speed_of_light / f
        result.add_row(aperture=section.aperture, frequency=f, wavelength=wavelength,
                       rayleigh_distance=rayleigh_distance(section.aperture, wavelength))
    return result


def switches_with_closed(n_rf: int, n_subarrays: int, count: int) -> SwitchNetwork:
    """
    A switch network with `count` closed switches.

    Chains are first dealt to subarrays round-robin; further switches close
    in row-major order.
    """
    if not n_rf <= count <= n_rf * n_subarrays:
        raise InvalidArgumentError(f"Closed switch count must lie in [{n_rf}, {n_rf * n_subarrays}], got {count}")
    closed = np.zeros((n_rf, n_subarrays), dtype=bool)
    closed[np.arange(n_rf), np.arange(n_rf) % n_subarrays] = True
    for chain, subarray in np.argwhere(~closed)[:count - n_rf]:
        closed[chain, subarray] = True
    return SwitchNetwork(closed, allow_dark=n_rf < n_subarrays)


def run_power_budget(config: ScenarioConfig) -> SweepResult:
    """Device census and consumed power of each architecture."""
    section = config.power_budget
    model = config.power_model
    result = _result('power-budget', config, {'phase_device_power': 'W', 'power': 'W'})

    points = []
    for architecture in section.architectures:
        if architecture == DAOSA:
            points.extend((DAOSA, closed) for closed in section.daosa_closed_switches)
        else:
            points.append((architecture, None))

    for architecture, closed in points:
        point = {'architecture': architecture, 'closed_switches': closed}
        try:
            switches = None
            subarrays = 1 if architecture == FC else section.n_subarrays
            if architecture == AOSA:
                subarrays = section.n_rf
            if architecture == DAOSA:
                switches = switches_with_closed(section.n_rf, section.n_subarrays, closed)
            census = device_census(architecture, section.n_antennas, section.n_rf, subarrays, switches)
        except POINT_ERRORS as e:
            result.add_flagged(str(e), **point)
            continue
        device_power = model.p_ttd if census.device_kind == TTD else model.p_ps
        result.add_row(
            **point,
            **census.to_dict(),
            phase_device_power=census.phase_devices_active * device_power,
            power=power_consumption(census, model),
        )
    return result


EXPERIMENTS: Dict[str, Callable[[ScenarioConfig], SweepResult]] = {
    'rate-vs-power': run_rate_vs_power,
    'daosa-tradeoff': run_daosa_tradeoff,
    'array-gain': run_array_gain,
    'rayleigh': run_rayleigh,
    'power-budget': run_power_budget,
    'ttd-resolution': run_ttd_resolution,
    'squint-vs-bandwidth': run_squint_vs_bandwidth,
    'wsms-subarrays': run_wsms_subarrays,
}
