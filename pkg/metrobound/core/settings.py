import os
from enum import Enum

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Env(str, Enum):
    DEV = "dev"
    CI = "ci"
    PROD = "prod"


class Settings(BaseSettings):
    APP_ENV: Env = Env.DEV

    # limite do espaço completo 2^N (2^14 = 16384 é o teto prático para eigh)
    FULL_SPACE_CAP: int = Field(default=14, ge=1, le=20)
    THREADS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    DEFAULT_SEED: int = 20240611
    DEFAULT_SAMPLES: int = Field(default=10_000, ge=1)

    OPTIMIZER_STARTS: int = Field(default=200, ge=0)
    OPTIMIZER_GTOL: float = 1e-9
    OPTIMIZER_MAX_ITER: int = Field(default=2000, ge=1)

    # acima disso τ sai só pelo caminho de Faulhaber
    TAU_DIRECT_CAP: int = 10_000
    SECTOR_CHECK_MAX_N: int = 12
    HAB_GRID_ANGLES: int = 721
    HAB_GRID_RADII: int = 361
    MC_BATCH_SIZE: int = Field(default=5_000, ge=1)

    LOG_JSON: bool = False
    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="METROBOUND_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# cria instância global
settings = Settings()
