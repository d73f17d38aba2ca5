"""
Configuration Validation and Loading
Handles YAML loading, validation and saving for the lab configuration
"""

from pathlib import Path
from typing import Any, Dict, Union

import structlog
import yaml
from pydantic import ValidationError

from ..models.errors import ConfigurationError
from .models import LabConfig

logger = structlog.get_logger(__name__)

MAX_CONFIG_BYTES = 1024 * 1024


class ConfigValidator:
    """Handles configuration file checks"""

    @staticmethod
    def validate_file_security(config_path: Path) -> None:
        """Validate the configuration file exists, is YAML and is not oversized"""
        if not config_path.exists():
            raise ConfigurationError(f"Configuration file not found: {config_path}")

        if config_path.suffix.lower() not in [".yaml", ".yml"]:
            raise ConfigurationError(f"Invalid config file extension: {config_path.suffix}")

        if config_path.stat().st_size > MAX_CONFIG_BYTES:
            raise ConfigurationError("Configuration file too large (max 1MB)")


class ConfigLoader:
    """Handles configuration loading from YAML files using native Pydantic validation"""

    @staticmethod
    def load_from_yaml_file(config_path: Union[str, Path]) -> LabConfig:
        """
        Load configuration from a YAML file

        Raises:
            ConfigurationError: missing file, bad YAML or a failed validation
        """
        config_path = Path(config_path)
        ConfigValidator.validate_file_security(config_path)

        try:
            with open(config_path, "r", encoding="utf-8") as f:
                yaml_data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML syntax in {config_path}: {e}") from e

        if yaml_data is None:
            yaml_data = {}
        if not isinstance(yaml_data, dict):
            raise ConfigurationError("Configuration file must contain a YAML dictionary")

        config = ConfigLoader.load_from_yaml_data(yaml_data)
        config.config_loaded_from = str(config_path)
        logger.info("config_loaded", path=str(config_path), field=config.field.family)
        return config

    @staticmethod
    def load_from_yaml_data(yaml_data: Dict[str, Any]) -> LabConfig:
        """Create configuration from a YAML dictionary"""
        try:
            return LabConfig.model_validate(yaml_data)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {e}") from e
