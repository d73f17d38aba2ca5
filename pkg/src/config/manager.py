"""
Configuration Manager
Resolves the configuration source and applies command-line overrides
"""

from pathlib import Path
from typing import Any, Dict, Optional

import structlog

from .models import LabConfig
from .settings import LabSettings
from .validation import ConfigLoader

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "config" / "lab.yaml"


class ConfigManager:
    """
    Configuration manager for the verification lab

    Provides:
    - Loading from an explicit path, the CARLEMAN_LAB_CONFIG path, config/lab.yaml or defaults
    - Environment overrides for log level and output directory
    - Copy-on-write overrides from the command line
    """

    def __init__(self, config_file: Optional[str] = None, settings: Optional[LabSettings] = None):
        self.config_file = config_file
        self.settings = settings or LabSettings()
        self.logger = structlog.get_logger(__name__)
        self._config: Optional[LabConfig] = None

    @property
    def config(self) -> LabConfig:
        """Current configuration, loading it on first access"""
        if self._config is None:
            self.load_config(self.config_file)
        return self._config  # type: ignore[return-value]

    def load_config(self, config_file: Optional[str] = None) -> LabConfig:
        """Load configuration; an explicit file that fails to load raises ConfigurationError"""
        source = config_file or self.settings.config
        if source:
            config = ConfigLoader.load_from_yaml_file(source)
        elif DEFAULT_CONFIG_PATH.exists():
            config = ConfigLoader.load_from_yaml_file(DEFAULT_CONFIG_PATH)
        else:
            config = LabConfig()
            self.logger.warning("config_defaults_used", reason="no configuration file found")

        runtime: Dict[str, Any] = {}
        if self.settings.log_level is not None:
            runtime["log_level"] = self.settings.log_level
        if self.settings.output_dir is not None:
            runtime["output_dir"] = self.settings.output_dir
        if runtime:
            config = self._with_runtime(config, runtime)

        self._config = config
        return config

    def apply_overrides(
        self,
        seed: Optional[int] = None,
        grid_level: Optional[int] = None,
        tolerance: Optional[float] = None,
        serial: Optional[bool] = None,
    ) -> LabConfig:
        """Return and keep a copy of the configuration with the given runtime values replaced"""
        updates = {
            key: value
            for key, value in {
                "seed": seed,
                "grid_level": grid_level,
                "tolerance": tolerance,
                "serial": serial,
            }.items()
            if value is not None
        }
        if updates:
            self._config = self._with_runtime(self.config, updates)
            self.logger.info("config_overrides_applied", **updates)
        return self.config

    @staticmethod
    def _with_runtime(config: LabConfig, updates: Dict[str, Any]) -> LabConfig:
        # overrides pass through full validation
        data = config.model_dump(mode="json")
        data["runtime"].update(updates)
        updated = ConfigLoader.load_from_yaml_data(data)
        updated.config_loaded_from = config.config_loaded_from
        return updated
