"""
Settings - Layered runtime configuration for the lab.

Precedence: explicit overrides > QGT_* environment > .env > config/lab.yaml > defaults.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

from pydantic import Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

DEFAULT_PRIME = 2147483647
DEFAULT_CONFIG_PATH = Path("config/lab.yaml")


class LabSettings(BaseSettings):
    """Runtime knobs shared by the CLI, scripts and the sweep runner."""

    model_config = SettingsConfigDict(
        env_prefix="QGT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        yaml_file=DEFAULT_CONFIG_PATH,
    )

    prime: int = DEFAULT_PRIME
    free_var_budget: int = Field(default=20, ge=0)
    exact_cap: int = Field(default=64, ge=1)
    workers: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    log_format: Literal["console", "json"] = "console"

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            YamlConfigSettingsSource(settings_cls),
        )


def load_settings(config_path: Path | None = None, **overrides: Any) -> LabSettings:
    """
    Build LabSettings, optionally from a different YAML file.

    None-valued overrides are dropped so unset CLI flags fall through to
    the lower layers.
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    if config_path is None:
        return LabSettings(**values)

    class _FileSettings(LabSettings):
        model_config = SettingsConfigDict(yaml_file=config_path)

    return _FileSettings(**values)
