"""Per-vertex displacement fields for template deformation."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.exceptions import InvalidArgumentError, ShapeMismatchError
from src.models.geometry import freeze_array


class DisplacementField(BaseModel):
    """One displacement vector (meters) per template vertex."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    displacements: np.ndarray
    template_vertex_count: int

    @field_validator("displacements", mode="before")
    @classmethod
    def coerce_displacements(cls, value) -> np.ndarray:
        array = np.asarray(value, dtype=np.float64)
        if array.size == 0:
            array = array.reshape(0, 3)
        if array.ndim != 2 or array.shape[1] != 3:
            raise InvalidArgumentError(f"displacements must have shape (n, 3), got {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("displacements must be finite")
        return freeze_array(array)

    @model_validator(mode="after")
    def check_length(self) -> "DisplacementField":
        if len(self.displacements) != self.template_vertex_count:
            raise ShapeMismatchError(
                f"field has {len(self.displacements)} vectors for "
                f"{self.template_vertex_count} template vertices"
            )
        return self

    @classmethod
    def from_array(cls, values) -> "DisplacementField":
        array = np.asarray(values, dtype=np.float64)
        return cls(displacements=array, template_vertex_count=len(array))

    @classmethod
    def zeros(cls, count: int) -> "DisplacementField":
        return cls.from_array(np.zeros((count, 3)))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.displacements)

    @property
    def max_magnitude(self) -> float:
        if len(self.displacements) == 0:
            return 0.0
        return float(np.linalg.norm(self.displacements, axis=1).max())

    def __add__(self, other: "DisplacementField") -> "DisplacementField":
        if self.template_vertex_count != other.template_vertex_count:
            raise ShapeMismatchError(
                f"cannot add fields of length {self.template_vertex_count} "
                f"and {other.template_vertex_count}"
            )
        return DisplacementField.from_array(self.displacements + other.displacements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DisplacementField):
            return NotImplemented
        return np.array_equal(self.displacements, other.displacements)

    def __hash__(self) -> int:
        return hash(self.displacements.tobytes())
