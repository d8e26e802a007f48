"""
Typed scenario settings.

load_config turns the JSON document held by a ConfigManager into frozen
dataclasses and checks every value, so the experiment runners never see an
unvalidated number.
"""
import logging
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Tuple

from ..architectures.connectivity import ARCHITECTURES
from ..channel.channel_builder import GRANULARITIES, PROPAGATION_MODES
from ..utils.exceptions import ConfigValidationError, InvalidArgumentError
from ..utils.metrics import GAIN_CONVENTIONS, PowerModel
from .config_manager import ConfigManager

logger = logging.getLogger(__name__)

FC_SOLVERS = ('altmin', 'omp')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass(frozen=True)
class GeometryConfig:
    n_x: int
    n_y: int
    spacing: float
    wsms_separation: Optional[float]

    @property
    def n_antennas(self) -> int:
        return self.n_x * self.n_y


@dataclass(frozen=True)
class ChannelConfig:
    distance: float
    height: float
    carrier_frequency: float
    bandwidth: float
    n_subcarriers: int
    n_paths: int
    reflection_loss_db: float
    propagation_mode: str
    spherical_granularity: str
    blocked_los: bool


@dataclass(frozen=True)
class RadioConfig:
    noise_figure_db: float
    max_streams: Optional[int]


@dataclass(frozen=True)
class AlgorithmConfig:
    fc_solver: str
    max_iter: int
    tol: float
    rank_threshold: float
    dictionary_azimuth: int
    dictionary_elevation: int
    seed: int


@dataclass(frozen=True)
class RateVsPowerConfig:
    power_dbm: Tuple[float, ...]
    architectures: Tuple[str, ...]
    n_rf: int
    wsms_subarrays: int
    check_ordering: bool


@dataclass(frozen=True)
class DaosaTradeoffConfig:
    n_rf: int
    n_subarrays: int
    transmit_power_dbm: float


@dataclass(frozen=True)
class ArrayGainConfig:
    bandwidth: float
    n_subcarriers: int
    azimuth_deg: float
    elevation_deg: float
    convention: str


@dataclass(frozen=True)
class TtdResolutionConfig:
    bits: Tuple[int, ...]
    bandwidth: float
    n_subcarriers: int
    azimuth_deg: float
    elevation_deg: float
    convention: str


@dataclass(frozen=True)
class SquintVsBandwidthConfig:
    fractional_bandwidths: Tuple[float, ...]
    n_subcarriers: int
    azimuth_deg: float
    elevation_deg: float
    convention: str


@dataclass(frozen=True)
class WsmsSubarraysConfig:
    k_values: Tuple[int, ...]
    n_rf: int
    transmit_power_dbm: float


@dataclass(frozen=True)
class RayleighConfig:
    aperture: float
    frequencies: Tuple[float, ...]


@dataclass(frozen=True)
class PowerBudgetConfig:
    n_antennas: int
    n_rf: int
    n_subarrays: int
    architectures: Tuple[str, ...]
    daosa_closed_switches: Tuple[int, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario with its provenance."""
    geometry: GeometryConfig
    channel: ChannelConfig
    radio: RadioConfig
    power_model: PowerModel
    algorithm: AlgorithmConfig
    rate_vs_power: RateVsPowerConfig
    daosa_tradeoff: DaosaTradeoffConfig
    array_gain: ArrayGainConfig
    ttd_resolution: TtdResolutionConfig
    squint_vs_bandwidth: SquintVsBandwidthConfig
    wsms_subarrays: WsmsSubarraysConfig
    rayleigh: RayleighConfig
    power_budget: PowerBudgetConfig
    config_hash: str
    source: str


class _Section:
    """Typed reads from one configuration section, naming the dotted key on failure."""

    def __init__(self, manager: ConfigManager, name: str):
        self.name = name
        self.values = manager.get(name, {})

    def _fail(self, key: str, message: str) -> None:
        dotted = f"{self.name}.{key}"
        raise ConfigValidationError(f"{dotted}: {message}", key=dotted)

    def _raw(self, key: str, optional: bool = False) -> Any:
        if self.values.get(key) is None and not optional:
            self._fail(key, "required value is missing")
        return self.values.get(key)

    def number(self, key: str, positive: bool = True, optional: bool = False) -> Optional[float]:
        value = self._raw(key, optional)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self._fail(key, f"expected a number, got {value!r}")
        if positive and value <= 0:
            self._fail(key, f"must be positive, got {value}")
        return float(value)

    def integer(self, key: str, minimum: int = 1, optional: bool = False) -> Optional[int]:
        value = self._raw(key, optional)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            self._fail(key, f"expected an integer, got {value!r}")
        if value < minimum:
            self._fail(key, f"must be at least {minimum}, got {value}")
        return int(value)

    def choice(self, key: str, allowed: Iterable[str]) -> str:
        value = self._raw(key)
        allowed = tuple(allowed)
        if value not in allowed:
            self._fail(key, f"must be one of {list(allowed)}, got {value!r}")
        return value

    def flag(self, key: str) -> bool:
        value = self._raw(key)
        if not isinstance(value, bool):
            self._fail(key, f"expected true or false, got {value!r}")
        return value

    def numbers(self, key: str, positive: bool = True) -> Tuple[float, ...]:
        values = self._sequence(key)
        for value in values:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                self._fail(key, f"expected numbers, got {value!r}")
            if positive and value <= 0:
                self._fail(key, f"entries must be positive, got {value}")
        return tuple(float(v) for v in values)

    def integers(self, key: str, minimum: int = 1) -> Tuple[int, ...]:
        values = self._sequence(key)
        for value in values:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
                self._fail(key, f"expected integers, got {value!r}")
            if value < minimum:
                self._fail(key, f"entries must be at least {minimum}, got {value}")
        return tuple(int(v) for v in values)

    def choices(self, key: str, allowed: Iterable[str]) -> Tuple[str, ...]:
        values = self._sequence(key)
        allowed = tuple(allowed)
        for value in values:
            if value not in allowed:
                self._fail(key, f"entries must be among {list(allowed)}, got {value!r}")
        return tuple(values)

    def _sequence(self, key: str) -> list:
        value = self._raw(key)
        if not isinstance(value, list) or not value:
            self._fail(key, f"expected a non-empty list, got {value!r}")
        return value


def _power_model(manager: ConfigManager) -> PowerModel:
    section = _Section(manager, 'power_model')
    values = {key: section.number(key, positive=False) for key in section.values}
    for key, value in values.items():
        if value < 0:
            section._fail(key, f"cannot be negative, got {value}")
    try:
        return PowerModel.from_dict(values)
    except InvalidArgumentError as e:
        raise ConfigValidationError(str(e), key='power_model') from e


def _validate_logging(manager: ConfigManager) -> None:
    section = _Section(manager, 'logging')
    level = section._raw('level')
    if not isinstance(level, str) or level.upper() not in LOG_LEVELS:
        section._fail('level', f"must be one of {list(LOG_LEVELS)}, got {level!r}")
    section.flag('console_enabled')
    section.flag('file_enabled')
    rotation = _Section(manager, 'logging.rotation')
    rotation.integer('max_bytes')
    rotation.integer('backup_count', minimum=0)


def scenario_from_manager(manager: ConfigManager) -> ScenarioConfig:
    """Validate a loaded configuration and build its typed view."""
    geometry = _Section(manager, 'geometry')
    channel = _Section(manager, 'channel')
    radio = _Section(manager, 'radio')
    algorithm = _Section(manager, 'algorithm')
    rate = _Section(manager, 'rate_vs_power')
    daosa = _Section(manager, 'daosa_tradeoff')
    gain = _Section(manager, 'array_gain')
    ttd = _Section(manager, 'ttd_resolution')
    squint = _Section(manager, 'squint_vs_bandwidth')
    wsms = _Section(manager, 'wsms_subarrays')
    rayleigh = _Section(manager, 'rayleigh')
    budget = _Section(manager, 'power_budget')
    _validate_logging(manager)

    geometry_config = GeometryConfig(
        n_x=geometry.integer('n_x'),
        n_y=geometry.integer('n_y'),
        spacing=geometry.number('spacing'),
        wsms_separation=geometry.number('wsms_separation', optional=True),
    )

    channel_config = ChannelConfig(
        distance=channel.number('distance'),
        height=channel.number('height'),
        carrier_frequency=channel.number('carrier_frequency'),
        bandwidth=channel.number('bandwidth', positive=False),
        n_subcarriers=channel.integer('n_subcarriers'),
        n_paths=channel.integer('n_paths'),
        reflection_loss_db=channel.number('reflection_loss_db', positive=False),
        propagation_mode=channel.choice('propagation_mode', PROPAGATION_MODES),
        spherical_granularity=channel.choice('spherical_granularity', GRANULARITIES),
        blocked_los=channel.flag('blocked_los'),
    )
    if channel_config.bandwidth < 0:
        channel._fail('bandwidth', f"cannot be negative, got {channel_config.bandwidth}")
    if channel_config.n_paths not in (1, 2):
        channel._fail('n_paths', f"the backhaul scene has 1 (LoS) or 2 (LoS + ground) paths, got {channel_config.n_paths}")
    if channel_config.reflection_loss_db < 15.0:
        channel._fail('reflection_loss_db', f"must be at least 15 dB, got {channel_config.reflection_loss_db}")
    if channel_config.blocked_los and channel_config.n_paths < 2:
        channel._fail('blocked_los', "blocking the LoS of a single-path scene leaves no path")

    radio_config = RadioConfig(
        noise_figure_db=radio.number('noise_figure_db', positive=False),
        max_streams=radio.integer('max_streams', optional=True),
    )

    algorithm_config = AlgorithmConfig(
        fc_solver=algorithm.choice('fc_solver', FC_SOLVERS),
        max_iter=algorithm.integer('max_iter'),
        tol=algorithm.number('tol'),
        rank_threshold=algorithm.number('rank_threshold'),
        dictionary_azimuth=algorithm.integer('dictionary_azimuth'),
        dictionary_elevation=algorithm.integer('dictionary_elevation'),
        seed=algorithm.integer('seed', minimum=0),
    )
    if algorithm_config.rank_threshold >= 1:
        algorithm._fail('rank_threshold', "must lie in (0, 1)")

    budget_config = PowerBudgetConfig(
        n_antennas=budget.integer('n_antennas'),
        n_rf=budget.integer('n_rf'),
        n_subarrays=budget.integer('n_subarrays'),
        architectures=budget.choices('architectures', ARCHITECTURES),
        daosa_closed_switches=budget.integers('daosa_closed_switches'),
    )

    scenario = ScenarioConfig(
        geometry=geometry_config,
        channel=channel_config,
        radio=radio_config,
        power_model=_power_model(manager),
        algorithm=algorithm_config,
        rate_vs_power=RateVsPowerConfig(
            power_dbm=rate.numbers('power_dbm', positive=False),
            architectures=rate.choices('architectures', ('fc', 'aosa', 'wsms')),
            n_rf=rate.integer('n_rf'),
            wsms_subarrays=rate.integer('wsms_subarrays'),
            check_ordering=rate.flag('check_ordering'),
        ),
        daosa_tradeoff=DaosaTradeoffConfig(
            n_rf=daosa.integer('n_rf'),
            n_subarrays=daosa.integer('n_subarrays', minimum=2),
            transmit_power_dbm=daosa.number('transmit_power_dbm', positive=False),
        ),
        array_gain=ArrayGainConfig(
            bandwidth=gain.number('bandwidth'),
            n_subcarriers=gain.integer('n_subcarriers', minimum=2),
            azimuth_deg=gain.number('azimuth_deg', positive=False),
            elevation_deg=gain.number('elevation_deg', positive=False),
            convention=gain.choice('convention', GAIN_CONVENTIONS),
        ),
        ttd_resolution=TtdResolutionConfig(
            bits=ttd.integers('bits'),
            bandwidth=ttd.number('bandwidth'),
            n_subcarriers=ttd.integer('n_subcarriers', minimum=2),
            azimuth_deg=ttd.number('azimuth_deg', positive=False),
            elevation_deg=ttd.number('elevation_deg', positive=False),
            convention=ttd.choice('convention', GAIN_CONVENTIONS),
        ),
        squint_vs_bandwidth=SquintVsBandwidthConfig(
            fractional_bandwidths=squint.numbers('fractional_bandwidths'),
            n_subcarriers=squint.integer('n_subcarriers', minimum=2),
            azimuth_deg=squint.number('azimuth_deg', positive=False),
            elevation_deg=squint.number('elevation_deg', positive=False),
            convention=squint.choice('convention', GAIN_CONVENTIONS),
        ),
        wsms_subarrays=WsmsSubarraysConfig(
            k_values=wsms.integers('k_values'),
            n_rf=wsms.integer('n_rf'),
            transmit_power_dbm=wsms.number('transmit_power_dbm', positive=False),
        ),
        rayleigh=RayleighConfig(
            aperture=rayleigh.number('aperture'),
            frequencies=rayleigh.numbers('frequencies'),
        ),
        power_budget=budget_config,
        config_hash=manager.config_hash(),
        source=str(manager.config_path),
    )
    logger.info(f"Scenario validated: {geometry_config.n_antennas} antennas, "
                f"{channel_config.carrier_frequency / 1e12:.3g} THz, {channel_config.distance} m")
    return scenario


def load_config(path: Optional[str] = None, overrides: Iterable[str] = ()) -> ScenarioConfig:
    """
    Load, override and validate a scenario file.

    Args:
        path: JSON scenario file, None for the default location
        overrides: `key=value` strings applied before validation

    Returns:
        ScenarioConfig

    Raises:
        ConfigValidationError: Naming the offending dotted key
    """
    manager = ConfigManager(path)
    manager.apply_overrides(overrides)
    return scenario_from_manager(manager)
