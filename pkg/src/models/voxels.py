"""Voxel grids and retrieval results."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from src.exceptions import InvalidArgumentError
from src.models.geometry import Vector3, freeze_array


class VoxelGrid(BaseModel):
    """Occupancy sampled at cell centers; occupancy is indexed [x, y, z]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    origin: Vector3
    cell_size: float
    dims: tuple[int, int, int]
    occupancy: np.ndarray

    @field_validator("cell_size")
    @classmethod
    def check_cell_size(cls, value: float) -> float:
        if not (value > 0 and math.isfinite(value)):
            raise InvalidArgumentError(f"cell_size must be positive, got {value}")
        return value

    @field_validator("dims")
    @classmethod
    def check_dims(cls, value: tuple[int, int, int]) -> tuple[int, int, int]:
        if any(n < 1 for n in value):
            raise InvalidArgumentError(f"dims must be at least 1, got {value}")
        return value

    @field_validator("occupancy", mode="before")
    @classmethod
    def coerce_occupancy(cls, value, info: ValidationInfo) -> np.ndarray:
        dims = info.data.get("dims")
        if dims is None:
            raise InvalidArgumentError("occupancy needs valid dims")
        array = np.asarray(value, dtype=bool)
        if array.size != math.prod(dims):
            raise InvalidArgumentError(
                f"occupancy has {array.size} cells, dims {dims} need {math.prod(dims)}"
            )
        return freeze_array(array.reshape(dims))

    @property
    def occupied_count(self) -> int:
        return int(np.count_nonzero(self.occupancy))

    @property
    def occupied_volume(self) -> float:
        return self.occupied_count * self.cell_size ** 3

    @property
    def cell_count(self) -> int:
        return math.prod(self.dims)

    def same_frame(self, other: "VoxelGrid") -> bool:
        return (
            self.dims == other.dims
            and math.isclose(self.cell_size, other.cell_size, rel_tol=1e-9)
            and all(
                math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12 * self.cell_size)
                for a, b in zip(self.origin, other.origin)
            )
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoxelGrid):
            return NotImplemented
        return (
            self.origin == other.origin
            and self.cell_size == other.cell_size
            and self.dims == other.dims
            and np.array_equal(self.occupancy, other.occupancy)
        )

    def __hash__(self) -> int:
        return hash((self.origin, self.cell_size, self.dims, self.occupancy.tobytes()))

    def __repr__(self) -> str:
        return (
            f"VoxelGrid(dims={self.dims}, cell_size={self.cell_size!r}, "
            f"occupied={self.occupied_count})"
        )


class MatchResult(BaseModel):
    """One ranked database entry."""

    model_config = ConfigDict(frozen=True, protected_namespaces=())

    model_id: str
    score: float = Field(..., ge=0.0, le=1.0)
    display_name: str | None = None

    @staticmethod
    def format_table(results: list["MatchResult"]) -> str:
        """Render results as TSV with a header row and 6-decimal scores."""
        lines = ["rank\tmodel_id\tscore"]
        lines.extend(
            f"{rank}\t{result.model_id}\t{result.score:.6f}"
            for rank, result in enumerate(results, start=1)
        )
        return "\n".join(lines) + "\n"
