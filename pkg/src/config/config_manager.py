"""
Configuration manager for THz hybrid beamforming scenarios.

This module loads a scenario from a single JSON file, fills missing values
from the built-in defaults and exposes them through dot-notation access.
"""
import copy
import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from ..utils.exceptions import ConfigValidationError

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = 'THZ_HBF_CONFIG_DIR'
CONFIG_FILE_NAME = 'config.json'


def _merge(defaults: Dict[str, Any], values: Dict[str, Any], prefix: str = '') -> Dict[str, Any]:
    """Overlay values on defaults, rejecting keys the defaults do not know."""
    merged = copy.deepcopy(defaults)
    for key, value in values.items():
        dotted = f"{prefix}{key}"
        if key not in defaults:
            raise ConfigValidationError(f"Unknown configuration key '{dotted}'", key=dotted)
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigValidationError(f"'{dotted}' must be a section", key=dotted)
            merged[key] = _merge(defaults[key], value, prefix=f"{dotted}.")
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def default_config_path() -> Path:
    """config.json in $THZ_HBF_CONFIG_DIR, or in the project root when unset."""
    config_dir = os.environ.get(CONFIG_DIR_ENV)
    if config_dir:
        return Path(config_dir) / CONFIG_FILE_NAME
    return Path(__file__).parent.parent.parent / CONFIG_FILE_NAME


class ConfigManager:
    """
    Scenario configuration loaded from one JSON file.

    Unlike a process-wide singleton, several managers may coexist so sweeps
    over different scenario files can run in one process.
    """

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = Path(config_path) if config_path is not None else default_config_path()
        self._config = self._load_config()
        logger.info(f"Configuration loaded from {self.config_path}")

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from JSON file."""
        defaults = self._get_default_config()
        if not self.config_path.exists():
            logger.warning(f"Config file not found at {self.config_path}, using defaults")
            return defaults

        try:
            with open(self.config_path, 'r') as f:
                values = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigValidationError(f"Malformed JSON in {self.config_path}: {e}") from e
        if not isinstance(values, dict):
            raise ConfigValidationError(f"{self.config_path} must hold a JSON object")

        config = _merge(defaults, values)
        self._validate_config(config)
        return config

    def _validate_config(self, config: Dict[str, Any]) -> None:
        """Validate the configuration structure."""
        required_sections = ['geometry', 'channel', 'radio', 'power_model', 'algorithm', 'logging', 'paths']

        for section in required_sections:
            if not isinstance(config.get(section), dict):
                raise ConfigValidationError(f"Missing required configuration section: {section}", key=section)

    def _get_default_config(self) -> Dict[str, Any]:
        """Return the default scenario: 32x32 array, 100 m link at 0.3 THz, two paths."""
        return {
            "geometry": {
                "n_x": 32,
                "n_y": 32,
                "spacing": 0.5,
                "wsms_separation": None
            },
            "channel": {
                "distance": 100.0,
                "height": 30.0,
                "carrier_frequency": 3.0e11,
                "bandwidth": 5.0e9,
                "n_subcarriers": 1,
                "n_paths": 2,
                "reflection_loss_db": 15.0,
                "propagation_mode": "planar",
                "spherical_granularity": "subarray",
                "blocked_los": False
            },
            "radio": {
                "noise_figure_db": 0.0,
                "max_streams": None
            },
            "power_model": {
                "p_pa": 0.060,
                "p_ps": 0.042,
                "p_rf": 0.200,
                "p_sw": 0.005,
                "p_bb": 0.300,
                "p_ttd": 0.080
            },
            "algorithm": {
                "fc_solver": "altmin",
                "max_iter": 200,
                "tol": 1e-6,
                "rank_threshold": 1e-3,
                "dictionary_azimuth": 64,
                "dictionary_elevation": 16,
                "seed": 0
            },
            "rate_vs_power": {
                "power_dbm": [float(p) for p in range(0, 31, 2)],
                "architectures": ["fc", "aosa", "wsms"],
                "n_rf": 8,
                "wsms_subarrays": 2,
                "check_ordering": True
            },
            "daosa_tradeoff": {
                "n_rf": 4,
                "n_subarrays": 4,
                "transmit_power_dbm": 20.0
            },
            "array_gain": {
                "bandwidth": 3.0e10,
                "n_subcarriers": 30,
                "azimuth_deg": 60.0,
                "elevation_deg": 10.0,
                "convention": "amplitude"
            },
            "ttd_resolution": {
                "bits": [2, 3, 4, 5, 6, 8],
                "bandwidth": 3.0e10,
                "n_subcarriers": 30,
                "azimuth_deg": 60.0,
                "elevation_deg": 10.0,
                "convention": "amplitude"
            },
            "squint_vs_bandwidth": {
                "fractional_bandwidths": [0.01, 0.02, 0.05, 0.1, 0.15, 0.2],
                "n_subcarriers": 30,
                "azimuth_deg": 60.0,
                "elevation_deg": 10.0,
                "convention": "amplitude"
            },
            "wsms_subarrays": {
                "k_values": [1, 2, 4],
                "n_rf": 8,
                "transmit_power_dbm": 20.0
            },
            "rayleigh": {
                "aperture": 0.1,
                "frequencies": [6.0e9, 6.0e10, 1.0e12]
            },
            "power_budget": {
                "n_antennas": 1024,
                "n_rf": 4,
                "n_subarrays": 4,
                "architectures": ["fc", "aosa", "wsms", "daosa"],
                "daosa_closed_switches": [4, 16]
            },
            "logging": {
                "level": "INFO",
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                "console_enabled": True,
                "file_enabled": False,
                "paths": {
                    "system_logs": "logs/system/"
                },
                "rotation": {
                    "max_bytes": 10485760,
                    "backup_count": 5
                }
            },
            "paths": {
                "results": "results/"
            }
        }

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Args:
            key_path: Dot-separated path to the configuration value (e.g., 'channel.distance')
            default: Default value if key is not found

        Returns:
            The configuration value or default
        """
        value = self._config
        try:
            for key in key_path.split('.'):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def get_section(self, section: str) -> Dict[str, Any]:
        """
        Get an entire configuration section.

        Args:
            section: The section name (e.g., 'channel', 'rate_vs_power')

        Returns:
            Dictionary containing the section configuration
        """
        return self._config.get(section, {})

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._config)

    def get_log_config(self) -> Dict[str, Any]:
        """Get logging configuration."""
        return self.get_section('logging')

    def update_config(self, key_path: str, value: Any) -> None:
        """
        Update an existing configuration value.

        Args:
            key_path: Dot-separated path to the configuration value
            value: New value to set

        Raises:
            ConfigValidationError: If the key does not exist or names a section
        """
        keys = key_path.split('.')
        config = self._config
        for depth, key in enumerate(keys[:-1]):
            config = config.get(key) if isinstance(config, dict) else None
            if not isinstance(config, dict):
                prefix = '.'.join(keys[:depth + 1])
                raise ConfigValidationError(f"Unknown configuration key '{prefix}'", key=key_path)
        if not isinstance(config, dict) or keys[-1] not in config:
            raise ConfigValidationError(f"Unknown configuration key '{key_path}'", key=key_path)
        if isinstance(config[keys[-1]], dict):
            raise ConfigValidationError(f"'{key_path}' is a section, not a value", key=key_path)

        config[keys[-1]] = value
        logger.info(f"Configuration updated: {key_path} = {value}")

    def apply_overrides(self, overrides: Iterable[str]) -> None:
        """
        Apply `key=value` overrides, as passed with --set.

        Values are parsed as JSON when possible, otherwise kept as strings.
        """
        for item in overrides:
            if '=' not in item:
                raise ConfigValidationError(f"Override '{item}' is not of the form key=value", key=item)
            key_path, raw = item.split('=', 1)
            key_path = key_path.strip()
            try:
                value = json.loads(raw)
            except json.JSONDecodeError:
                value = raw
            self.update_config(key_path, value)

    def config_hash(self) -> str:
        """sha256 of the canonical JSON of the configuration."""
        canonical = json.dumps(self._config, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def save_config(self, config_path: Optional[str] = None) -> bool:
        """
        Save current configuration to file.

        Args:
            config_path: Path to save configuration (uses current path if None)

        Returns:
            True if saved successfully
        """
        try:
            save_path = Path(config_path) if config_path else self.config_path
            with open(save_path, 'w') as f:
                json.dump(self._config, f, indent=2)
            logger.info(f"Configuration saved to {save_path}")
            return True
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")
            return False

    def reload_config(self) -> None:
        """Reload configuration from file, dropping in-memory overrides."""
        self._config = self._load_config()
        logger.info("Configuration reloaded successfully")


_default_manager: Optional[ConfigManager] = None


def get_config() -> ConfigManager:
    """Get the default configuration manager, created on first use."""
    global _default_manager
    if _default_manager is None:
        _default_manager = ConfigManager()
    return _default_manager
