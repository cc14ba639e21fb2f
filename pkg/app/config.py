from pydantic_settings import BaseSettings
from pydantic import Field
from typing import List


class Settings(BaseSettings):
    """Settings for the garside germ toolkit"""

    ENV: str = Field("dev", description="Environment: dev, test, production")

    LOG_LEVEL: str = "INFO"

    # Norm recursion
    GARSIDE_NODE_BUDGET: int = Field(
        200_000,
        description="Maximum memo nodes a single norm computation may create",
        ge=1,
    )

    # Builders
    GARSIDE_MAX_RANK: int = Field(5, description="Largest n accepted for type A_n builders", ge=1)
    GARSIDE_MAX_DIHEDRAL_M: int = Field(64, description="Largest m accepted for type I2(m) builders", ge=3)
    SUPPORTED_FAMILIES: List[str] = ["A", "I2"]

    # Geometry probes
    GARSIDE_TAMENESS_DEFAULT_N: int = Field(6, description="Default N for the tameness probe", ge=1)
    GARSIDE_TRANSLATION_DEFAULT_N: int = Field(12, description="Default N for translation length", ge=1)
    GARSIDE_DISTANCE_CACHE_SIZE: int = Field(
        65_536,
        description="Vertex distances remembered per germ (least recently used are dropped)",
        ge=1,
    )

    # Concurrent Smith normal form reductions
    GARSIDE_WORKER_THREADS: int = Field(4, description="Worker threads for per-dimension reductions", ge=1)
    GARSIDE_MAX_PROCESSING_SECONDS: float = Field(
        600.0,
        description="Wall-clock cap for one batch of boundary reductions",
        gt=0,
    )

    GARSIDE_RANDOM_SEED: int = Field(20240607, description="Seed for sampling helpers")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()  # type: ignore
