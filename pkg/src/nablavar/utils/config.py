"""Environment configuration shared by the CLI and the suite.

Values come from the process environment, optionally seeded from a `.env`
file through python-dotenv.
"""

from __future__ import annotations

import logging
import os
import sys

import dotenv
from pydantic import BaseModel, Field, field_validator

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Defaults read from NABLAVAR_* environment variables."""

    default_seed: int = Field(default=0, description="NABLAVAR_SEED")
    log_level: str = Field(default="WARNING", description="NABLAVAR_LOG_LEVEL")
    suite_trials: int = Field(default=100, ge=1, description="NABLAVAR_TRIALS")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level


def get_settings(*, load_env_file: bool = True) -> Settings:
    """Read the settings from the environment.

    Args:
        load_env_file: Load `.env` first (existing variables win).

    Returns:
        Validated settings.
    """
    if load_env_file:
        dotenv.load_dotenv()
    return Settings(
        default_seed=os.environ.get("NABLAVAR_SEED", "0"),  # type: ignore[arg-type]
        log_level=os.environ.get("NABLAVAR_LOG_LEVEL", "WARNING"),
        suite_trials=os.environ.get("NABLAVAR_TRIALS", "100"),  # type: ignore[arg-type]
    )


def configure_logging(level: str) -> None:
    """Send log records to stderr so stdout carries only results."""
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
