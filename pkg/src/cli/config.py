"""Configuration objects and helpers."""

from __future__ import annotations

from dataclasses import dataclass
import logging
from pathlib import Path

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from ..core.errors import UsageError
from ..core.lzc import CompressorId


@dataclass(slots=True, frozen=True)
class LoggingConfig:
    """Logging configuration."""

    level: int


@dataclass(slots=True, frozen=True)
class ScoringConfig:
    """Defaults shared by the scoring subcommands."""

    compressor: CompressorId
    precision: int


@dataclass(slots=True, frozen=True)
class OutputConfig:
    """Where relative output paths are resolved."""

    directory: Path | None

    def resolve(self, path: str | Path) -> Path:
        target = Path(path).expanduser()
        if self.directory is None or target.is_absolute():
            return target
        return self.directory / target


@dataclass(slots=True, frozen=True)
class AppConfig:
    """Aggregate application configuration dataclass."""

    logging: LoggingConfig
    scoring: ScoringConfig
    output: OutputConfig

    @property
    def compressor(self) -> CompressorId:
        return self.scoring.compressor

    def format_bits(self, value: float) -> str:
        """Render a score with the configured number of decimals."""

        return f"{value:.{self.scoring.precision}f}"


class Settings(BaseSettings):
    """Runtime configuration built from explicit command-line values only."""

    log_level: str | int = Field("WARNING")
    compressor: CompressorId = Field(CompressorId.LZ77)
    precision: int = Field(6, ge=0, le=17)
    output_dir: Path | None = Field(default=None)

    model_config = SettingsConfigDict(extra="forbid")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @field_validator("output_dir", mode="before")
    @classmethod
    def _expand_output_dir(cls, value: object) -> Path | None:
        if value in (None, ""):
            return None
        return Path(value).expanduser()

    @field_validator("log_level")
    @classmethod
    def _normalize_log_level(cls, value: str | int) -> int:
        if isinstance(value, int):
            return value
        name = value.upper().strip()
        if name not in logging._nameToLevel:  # noqa: SLF001 - accessing mapping for conversion only
            raise ValueError(f"Unknown log level: {value}")
        return logging._nameToLevel[name]

    def to_dataclass(self) -> AppConfig:
        """Transform runtime settings into frozen dataclasses."""

        return AppConfig(
            logging=LoggingConfig(level=self.log_level),
            scoring=ScoringConfig(compressor=self.compressor, precision=self.precision),
            output=OutputConfig(directory=self.output_dir),
        )


def load_settings(**values: object) -> AppConfig:
    """Validate explicit option values; ``None`` means "use the default"."""

    try:
        settings = Settings(**{key: value for key, value in values.items() if value is not None})
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise UsageError(f"invalid option {location}: {error['msg']}") from exc
    return settings.to_dataclass()


__all__ = [
    "AppConfig",
    "LoggingConfig",
    "OutputConfig",
    "ScoringConfig",
    "Settings",
    "load_settings",
]
