"""
Environment Settings
Process-level overrides read from CARLEMAN_LAB_* variables and an optional .env file
"""

from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from ..models.enums import LogLevel


class LabSettings(BaseSettings):
    """Environment overrides applied on top of the YAML configuration"""

    model_config = SettingsConfigDict(env_prefix="CARLEMAN_LAB_", env_file=".env", extra="ignore")

    config: Optional[str] = None
    log_level: Optional[LogLevel] = None
    output_dir: Optional[str] = None
