"""Voxel grid cache persistence."""

from .models import Base, VoxelCacheEntry
from .repositories import VoxelCacheRepository
from .engine import (
    create_cache_engine,
    create_session_factory,
    drop_cache,
    init_cache,
    session_scope,
)

__all__ = [
    # Models
    "Base",
    "VoxelCacheEntry",
    # Repositories
    "VoxelCacheRepository",
    # Engine and sessions
    "create_cache_engine",
    "create_session_factory",
    "drop_cache",
    "init_cache",
    "session_scope",
]
