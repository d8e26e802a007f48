from .config_manager import CONFIG_DIR_ENV, ConfigManager, default_config_path, get_config
from .settings import ScenarioConfig, load_config, scenario_from_manager
