"""
Runtime Configuration
Environment-driven settings shared by the library, the CLI and the scripts.
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

REPO_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """
    Settings read from HEPTAGON_* environment variables (or a .env file).

    Every operation that uses one of these also accepts an explicit keyword
    override; the settings only provide defaults.
    """

    model_config = SettingsConfigDict(
        env_prefix="HEPTAGON_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    data_dir: Path = Field(default=REPO_ROOT / "data", description="Shipped complexes and tables")
    field_p: int = Field(default=2, description="Characteristic of the working field")
    field_k: int = Field(default=15, description="Extension degree of the working field")
    seed: int = Field(default=0, ge=0, description="Base seed for every random choice")
    class_cap: int = Field(default=12, ge=0, description="Largest dim H^3 that is enumerated")
    lift_retries: int = Field(default=64, ge=1, description="Attempts before giving up on (onv)")
    dense_threshold: float = Field(default=0.2, gt=0, le=1, description="Active density that triggers dense elimination")
    polynomial_cap: int = Field(default=9, ge=2, description="Largest p^k for the universal polynomial")
    threads: int = Field(default=1, ge=1, description="Worker processes for class tables")


@lru_cache
def get_settings() -> Settings:
    """Return the process-wide settings (call get_settings.cache_clear() after changing env)."""
    return Settings()
