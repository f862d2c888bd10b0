"""Data access layer for cached voxel grids."""

import logging
from typing import List, Optional

from sqlalchemy import delete, select
from sqlalchemy.orm import Session

from src.models.voxels import VoxelGrid
from .models import VoxelCacheEntry, utc_now


logger = logging.getLogger(__name__)


class VoxelCacheRepository:
    """Repository for VoxelCacheEntry operations."""

    def __init__(self, session: Session):
        self.session = session

    def get(self, model_id: str, resolution: int) -> Optional[VoxelCacheEntry]:
        """Get the cached row for a model at a resolution, fresh or not."""
        result = self.session.execute(
            select(VoxelCacheEntry).where(
                VoxelCacheEntry.model_id == model_id,
                VoxelCacheEntry.resolution == resolution,
            )
        )
        return result.scalar_one_or_none()

    def get_fresh(self, model_id: str, content_hash: str, resolution: int) -> Optional[VoxelGrid]:
        """
        Get a cached grid only if it was computed from the same mesh bytes.

        Args:
            model_id: Database model id
            content_hash: sha256 hex digest of the mesh file
            resolution: Grid resolution

        Returns:
            The cached grid, or None on a miss or a stale row
        """
        entry = self.get(model_id, resolution)
        if entry is None:
            logger.debug("cache miss: %s @ %d", model_id, resolution)
            return None
        if entry.content_hash != content_hash:
            logger.debug("cache stale: %s @ %d", model_id, resolution)
            return None
        logger.debug("cache hit: %s @ %d", model_id, resolution)
        return entry.to_grid()

    def upsert(self, model_id: str, content_hash: str, grid: VoxelGrid) -> VoxelCacheEntry:
        """Insert or overwrite the row for ``model_id`` at the grid's resolution."""
        resolution = max(grid.dims)
        entry = self.get(model_id, resolution)
        if entry is None:
            entry = VoxelCacheEntry.from_grid(model_id, content_hash, resolution, grid)
            self.session.add(entry)
        else:
            entry.content_hash = content_hash
            entry.store(grid)
            entry.created_at = utc_now()
        self.session.flush()
        return entry

    def delete(self, model_id: str) -> int:
        """Delete every row of a model; returns the number removed."""
        result = self.session.execute(
            delete(VoxelCacheEntry).where(VoxelCacheEntry.model_id == model_id)
        )
        return result.rowcount or 0

    def list_all(self) -> List[VoxelCacheEntry]:
        result = self.session.execute(
            select(VoxelCacheEntry).order_by(VoxelCacheEntry.model_id, VoxelCacheEntry.resolution)
        )
        return list(result.scalars().all())
