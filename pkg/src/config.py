"""
Configuration management for VoCIC.
"""

import json
import logging
import os
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

LOGGER = logging.getLogger(__name__)

# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
TEMPLATES_DIR = Path(__file__).parent / "templates"

# Settings file
SETTINGS_FILE = Path.home() / ".vocic" / "settings.json"

CACHE_ENV_VAR = "VOCIC_CACHE"


# Load user settings
def load_user_settings(path: Path = SETTINGS_FILE) -> dict:
    """Load user settings from file."""
    if path.exists():
        try:
            with open(path, 'r') as f:
                return json.load(f)
        except Exception as e:
            LOGGER.warning(f"Failed to load user settings: {e}")
    return {}


USER_SETTINGS = load_user_settings()

# Defaults, overridable from the settings file
DEFAULT_FORMAT = USER_SETTINGS.get("format", "json")
DEFAULT_THREADS = USER_SETTINGS.get("threads", 1)
DEFAULT_MAX_TOTAL_DIM = USER_SETTINGS.get("max_total_dim", 6)
DEFAULT_EXTRA_PRIMES = USER_SETTINGS.get("extra_primes", 1)
DEFAULT_CACHE_PATH = USER_SETTINGS.get("cache_path")


def resolve_cache_path(flag: Optional[str]) -> Optional[Path]:
    """The --cache flag wins over VOCIC_CACHE, which wins over the settings file."""
    for candidate in (flag, os.getenv(CACHE_ENV_VAR), DEFAULT_CACHE_PATH):
        if candidate:
            return Path(candidate).expanduser()
    return None


class CliConfig(BaseModel):
    """Options shared by every subcommand."""

    format: Literal["json", "csv", "pretty"] = "json"
    cache_path: Optional[Path] = None
    threads: Union[int, Literal["auto"]] = 1
    max_total_dim: int = Field(default=6, ge=1)
    extra_primes: int = Field(default=1, ge=1)

    @field_validator("threads")
    @classmethod
    def resolve_threads(cls, value):
        if value == "auto":
            return os.cpu_count() or 1
        if value < 1:
            raise ValueError(f"threads must be >= 1, got {value}")
        return value

    @property
    def thread_count(self) -> int:
        return int(self.threads)
