"""
Runtime settings loaded from the environment
"""

import logging
import os
from typing import Optional

from pydantic import BaseModel, Field

from symdom.errors import ConfigurationError

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseModel):
    """Process-wide settings"""

    threads: int = Field(1, description="Worker threads for coefficient and driver loops")
    log_level: str = Field("WARNING", description="Logging level used by the CLI")
    seed: int = Field(0, description="Seed used when a command does not pass one")


def _int_from_env(name: str, default: str, minimum: Optional[int] = None) -> int:
    raw = os.getenv(name, default)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if minimum is not None and value < minimum:
        raise ConfigurationError(f"{name} must be at least {minimum}, got {value}")
    return value


def load_settings() -> Settings:
    """Load settings from environment variables (and a .env file if present)"""
    from dotenv import load_dotenv
    load_dotenv()

    log_level = os.getenv("SYMDOM_LOG_LEVEL", "WARNING").upper()
    if log_level not in _LOG_LEVELS:
        raise ConfigurationError(f"SYMDOM_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")

    settings = Settings(
        threads=_int_from_env("SYMDOM_THREADS", "1", minimum=1),
        log_level=log_level,
        seed=_int_from_env("SYMDOM_SEED", "0"),
    )
    logger.debug("Loaded settings: %s", settings)
    return settings


_global_settings: Optional[Settings] = None


def set_settings(settings: Settings) -> None:
    """Set the global settings"""
    global _global_settings
    _global_settings = settings


def get_settings() -> Settings:
    """Get the global settings, loading them from the environment on first use"""
    global _global_settings
    if _global_settings is None:
        _global_settings = load_settings()
    return _global_settings


def clear_settings() -> None:
    """Forget the global settings so the next access reloads them"""
    global _global_settings
    _global_settings = None
