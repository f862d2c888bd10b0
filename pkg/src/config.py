"""Configuration management using Pydantic settings."""

import logging
from typing import Literal
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Model database
    MESHFORGE_DB: str | None = Field(
        default=None,
        description="Default model database manifest for build and match"
    )
    VOXEL_CACHE_ENABLED: bool = Field(
        default=True,
        description="Cache canonical voxel grids in SQLite beside the manifest"
    )
    VOXEL_CACHE_FILENAME: str = Field(
        default=".meshforge_cache.sqlite",
        description="File name of the voxel cache database"
    )

    # Logging
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="WARNING",
        description="Log level for the stderr handler"
    )
    DEBUG: bool = Field(
        default=False,
        description="Enable debug mode (SQL echo, lenient config validation)"
    )

    # Geometry tolerances (meters)
    CSG_EPSILON: float = Field(
        default=1e-5,
        gt=0,
        description="Plane classification tolerance for BSP splitting"
    )
    WELD_EPSILON: float = Field(
        default=1e-7,
        gt=0,
        description="Distance under which vertices are merged"
    )
    DEGENERATE_AREA: float = Field(
        default=1e-12,
        ge=0,
        description="Triangles with smaller area (m^2) are dropped from CSG output"
    )

    # Primitive tessellation
    ELLIPSOID_STACKS: int = Field(
        default=16,
        description="Default latitude bands of the sphere primitive"
    )
    ELLIPSOID_SECTORS: int = Field(
        default=24,
        description="Default longitude sectors of the sphere primitive"
    )
    CYLINDER_SECTORS: int = Field(
        default=32,
        description="Default sectors of the cylinder primitive"
    )
    ICOSPHERE_SUBDIVISIONS: int = Field(
        default=3,
        ge=0,
        description="Midpoint subdivisions of the deformation template"
    )

    # Voxel matching
    VOXEL_RESOLUTION: int = Field(
        default=32,
        description="Grid resolution used for canonical voxelization"
    )
    CANONICAL_FILL: float = Field(
        default=0.92,
        gt=0,
        le=1,
        description="Fraction of the canonical grid cube spanned by the longest side"
    )
    RAY_JITTER: float = Field(
        default=1e-9,
        ge=0,
        description="Ray offset in cell units that keeps parity rays off mesh edges"
    )
    MATCH_TOP_K: int = Field(
        default=5,
        description="Number of ranked matches reported"
    )
    MATCH_WORKERS: int = Field(
        default=1,
        ge=1,
        description="Threads used to score database entries"
    )

    # Serialization
    OBJ_SIGNIFICANT_DIGITS: int = Field(
        default=9,
        ge=1,
        le=17,
        description="Significant digits for OBJ vertex coordinates"
    )

    def validate_tessellation(self) -> None:
        """Validate that default tessellation respects the primitive minimums."""
        if self.ELLIPSOID_STACKS < 3 or self.ELLIPSOID_SECTORS < 3:
            raise ValueError("ELLIPSOID_STACKS and ELLIPSOID_SECTORS must be at least 3")
        if self.CYLINDER_SECTORS < 3:
            raise ValueError("CYLINDER_SECTORS must be at least 3")
        if self.VOXEL_RESOLUTION < 4:
            raise ValueError("VOXEL_RESOLUTION must be at least 4")


# Create global settings instance
settings = Settings()

# Validate configuration on import
try:
    settings.validate_tessellation()
except ValueError as e:
    # Only warn during development, don't crash
    if not settings.DEBUG:
        raise
    logger.warning("Invalid configuration: %s", e)
