"""
Configuration management for the SC-PAQ pipeline.
"""

import os
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..data.models import SUPPORTED_BLOCK_SIZES


class Settings(BaseSettings):
    """Application settings with environment variable support (prefix ``SCPAQ_``)."""

    model_config = SettingsConfigDict(
        env_prefix="SCPAQ_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field("INFO", description="Minimum level for every log sink")
    log_file: Optional[str] = Field(None, description="Enables rotating text + JSON sinks")

    # Execution
    threads: int = Field(0, ge=0, description="Worker cap; 0 picks the CPU count")

    # Analysis defaults
    block_size: int = Field(16, description="Fixed coding block size N")
    default_model: str = Field("scpaq", description="Masking model used when none is given")
    scale_chroma_breakpoints: bool = Field(
        False, description="Scale chroma breakpoints h and j by 2^(b-8)"
    )

    # Output
    output_dir: str = Field("results", description="Default directory for artifacts")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("block_size")
    @classmethod
    def validate_block_size(cls, v: int) -> int:
        if v not in SUPPORTED_BLOCK_SIZES:
            raise ValueError(f"Block size must be one of: {list(SUPPORTED_BLOCK_SIZES)}")
        return v

    @field_validator("default_model")
    @classmethod
    def validate_default_model(cls, v: str) -> str:
        if v.lower() not in ("none", "idsq", "scpaq"):
            raise ValueError("Default model must be one of: ['none', 'idsq', 'scpaq']")
        return v.lower()

    @property
    def workers(self) -> int:
        """Concrete worker count derived from ``threads``."""
        return resolve_workers(self.threads)


def resolve_workers(threads: Optional[int]) -> int:
    """Map a configured thread cap to a usable worker count (0 or None = auto)."""
    if not threads:
        return max(1, os.cpu_count() or 1)
    return max(1, int(threads))


# Global settings instance
settings = Settings()
