from .system_logger import PACKAGE_LOGGER, configure_logging, setup_logger, setup_system_logger
