"""SQLAlchemy models for the voxel grid cache."""

from datetime import datetime, timezone

from sqlalchemy import DateTime, Float, Index, Integer, String, Text
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column

from src.formats.vox import pack_occupancy, unpack_occupancy
from src.models.voxels import VoxelGrid


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class Base(DeclarativeBase):
    """Base class for all cache models."""
    pass


class VoxelCacheEntry(Base):
    """Canonical voxel grid of one database model at one resolution."""

    __tablename__ = "voxel_cache"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    model_id: Mapped[str] = mapped_column(String(200), nullable=False, index=True)
    content_hash: Mapped[str] = mapped_column(String(64), nullable=False)
    resolution: Mapped[int] = mapped_column(Integer, nullable=False)

    # Grid frame
    dim_x: Mapped[int] = mapped_column(Integer, nullable=False)
    dim_y: Mapped[int] = mapped_column(Integer, nullable=False)
    dim_z: Mapped[int] = mapped_column(Integer, nullable=False)
    origin_x: Mapped[float] = mapped_column(Float, nullable=False)
    origin_y: Mapped[float] = mapped_column(Float, nullable=False)
    origin_z: Mapped[float] = mapped_column(Float, nullable=False)
    cell_size: Mapped[float] = mapped_column(Float, nullable=False)

    # packbits hex, C order
    occupancy: Mapped[str] = mapped_column(Text, nullable=False)

    created_at: Mapped[datetime] = mapped_column(DateTime, default=utc_now, nullable=False)

    __table_args__ = (
        Index("idx_model_resolution", "model_id", "resolution", unique=True),
    )

    @classmethod
    def from_grid(cls, model_id: str, content_hash: str, resolution: int, grid: VoxelGrid) -> "VoxelCacheEntry":
        entry = cls(model_id=model_id, content_hash=content_hash, resolution=resolution)
        entry.store(grid)
        return entry

    def store(self, grid: VoxelGrid) -> None:
        """Copy a grid's frame and occupancy into this row."""
        self.dim_x, self.dim_y, self.dim_z = grid.dims
        self.origin_x, self.origin_y, self.origin_z = grid.origin
        self.cell_size = grid.cell_size
        self.occupancy = pack_occupancy(grid.occupancy)

    def to_grid(self) -> VoxelGrid:
        dims = (self.dim_x, self.dim_y, self.dim_z)
        return VoxelGrid(
            origin=(self.origin_x, self.origin_y, self.origin_z),
            cell_size=self.cell_size,
            dims=dims,
            occupancy=unpack_occupancy(self.occupancy, dims),
        )

    def __repr__(self):
        return (
            f"<VoxelCacheEntry(model_id='{self.model_id}', resolution={self.resolution}, "
            f"hash='{self.content_hash[:12]}')>"
        )
