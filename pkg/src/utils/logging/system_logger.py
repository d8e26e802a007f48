"""
System logger configuration for the beamforming toolkit.

Nothing is configured on import: library code only creates module loggers,
and the CLI calls configure_logging once with the `logging` config section.
"""
import datetime
import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional, Union

PACKAGE_LOGGER = 'src'
DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str = PACKAGE_LOGGER,
                 log_level: Union[int, str] = logging.INFO,
                 log_file: Optional[str] = None,
                 console: bool = True,
                 log_format: Optional[str] = None,
                 max_file_size_mb: float = 10,
                 backup_count: int = 5,
                 console_level: Union[int, str, None] = None) -> logging.Logger:
    """
    Set up a logger with file and/or console handlers.

    Args:
        name: Logger name
        log_level: Logging level (e.g., logging.INFO, 'DEBUG')
        log_file: Path to log file (if None, file logging is disabled)
        console: Whether to log to console
        log_format: Custom log format (if None, default format is used)
        max_file_size_mb: Maximum size of log file in MB before rotation
        backup_count: Number of backup files to keep
        console_level: Level of the console handler, defaults to log_level

    Returns:
        A configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(log_level)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(log_format or DEFAULT_FORMAT)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=int(max_file_size_mb * 1024 * 1024),
            backupCount=backup_count
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if console:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(console_level if console_level is not None else log_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    return logger


def setup_system_logger(log_dir: str = 'logs/system',
                        log_level: Union[int, str] = logging.INFO,
                        console: bool = True,
                        log_format: Optional[str] = None,
                        max_file_size_mb: float = 10,
                        backup_count: int = 5,
                        console_level: Union[int, str, None] = None) -> logging.Logger:
    """
    Set up the package logger with a dated file under log_dir.

    Args:
        log_dir: Directory for system log files
        log_level: Logging level

    Returns:
        The configured package logger
    """
    os.makedirs(log_dir, exist_ok=True)

    timestamp = datetime.datetime.now().strftime('%Y%m%d')
    log_file = os.path.join(log_dir, f'system_{timestamp}.log')

    logger = setup_logger(
        name=PACKAGE_LOGGER,
        log_level=log_level,
        log_file=log_file,
        console=console,
        log_format=log_format,
        max_file_size_mb=max_file_size_mb,
        backup_count=backup_count,
        console_level=console_level,
    )
    logger.debug(f"System log file {log_file}")
    return logger


def configure_logging(log_config: Dict[str, Any],
                      quiet: bool = False,
                      verbose: bool = False) -> logging.Logger:
    """
    Install handlers from the `logging` configuration section.

    Args:
        log_config: Section with level, format, console_enabled, file_enabled,
            paths.system_logs and rotation.max_bytes / rotation.backup_count
        quiet: Console shows warnings and errors only
        verbose: Console and file log at DEBUG

    Returns:
        The configured package logger
    """
    level = 'DEBUG' if verbose else str(log_config.get('level', 'INFO')).upper()
    console_level = 'WARNING' if quiet else level
    rotation = log_config.get('rotation', {})
    options = dict(
        log_level=level,
        console=log_config.get('console_enabled', True),
        log_format=log_config.get('format', DEFAULT_FORMAT),
        max_file_size_mb=rotation.get('max_bytes', 10 * 1024 * 1024) / (1024 * 1024),
        backup_count=rotation.get('backup_count', 5),
        console_level=console_level,
    )

    if log_config.get('file_enabled', False):
        log_dir = log_config.get('paths', {}).get('system_logs', 'logs/system/')
        return setup_system_logger(log_dir=log_dir, **options)
    return setup_logger(name=PACKAGE_LOGGER, **options)
