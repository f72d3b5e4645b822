"""
Runtime settings loaded from the environment (and an optional .env file)
"""
from __future__ import annotations

import logging
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "LOGAMORT_"

# logging.getLevelNamesMapping is Python 3.11+; it returns a copy of _nameToLevel
_level_names_mapping = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))


class Settings(BaseModel):
    """Validated analyzer settings."""

    solver_timeout: float = Field(default=60.0, gt=0)
    branch_limit: int = Field(default=256, ge=1)
    big_m: int = Field(default=1000, ge=1)
    fuel: int = Field(default=1_000_000, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in _level_names_mapping():
            raise ValueError(f"unknown log level: {value}")
        return level


def load_settings(overrides: Optional[Dict[str, Any]] = None, dotenv: bool = True) -> Settings:
    """
    Build settings from LOGAMORT_* environment variables, then apply explicit overrides
    """
    if dotenv:
        load_dotenv()

    values: Dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            values[name] = raw

    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    settings = Settings(**values)
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings
