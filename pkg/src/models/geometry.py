"""Geometry value types: meshes, transforms, bounding boxes and reports."""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.exceptions import InvalidArgumentError, InvalidMeshError, InvalidTransformError


Vector3 = tuple[float, float, float]


def freeze_array(array: np.ndarray) -> np.ndarray:
    """Return a read-only array, copying only when the input is still writeable."""
    if array.flags.writeable:
        array = array.copy()
        array.flags.writeable = False
    return array


class Mesh(BaseModel):
    """Indexed triangle mesh; counter-clockwise faces seen from outside."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: np.ndarray
    faces: np.ndarray

    @field_validator("vertices", mode="before")
    @classmethod
    def coerce_vertices(cls, value) -> np.ndarray:
        try:
            array = np.asarray(value, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidMeshError(f"vertices are not numeric: {exc}") from exc
        if array.size == 0:
            array = array.reshape(0, 3)
        if array.ndim != 2 or array.shape[1] != 3:
            raise InvalidMeshError(f"vertices must have shape (n, 3), got {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidMeshError("vertices must be finite")
        return freeze_array(array)

    @field_validator("faces", mode="before")
    @classmethod
    def coerce_faces(cls, value) -> np.ndarray:
        try:
            array = np.asarray(value, dtype=np.int64)
        except (TypeError, ValueError, OverflowError) as exc:
            raise InvalidMeshError(f"faces are not integer triples: {exc}") from exc
        if array.size == 0:
            array = array.reshape(0, 3)
        if array.ndim != 2 or array.shape[1] != 3:
            raise InvalidMeshError(f"faces must be triangles with shape (m, 3), got {array.shape}")
        return freeze_array(array)

    @model_validator(mode="after")
    def check_indices(self) -> "Mesh":
        if len(self.faces) == 0:
            return self
        if self.faces.min() < 0 or self.faces.max() >= len(self.vertices):
            raise InvalidMeshError(
                f"face index out of range for {len(self.vertices)} vertices"
            )
        a, b, c = self.faces[:, 0], self.faces[:, 1], self.faces[:, 2]
        repeated = (a == b) | (b == c) | (c == a)
        if np.any(repeated):
            face = int(np.argmax(repeated))
            raise InvalidMeshError(f"face {face} references the same vertex twice")
        return self

    @classmethod
    def empty(cls) -> "Mesh":
        return cls(vertices=np.zeros((0, 3)), faces=np.zeros((0, 3), dtype=np.int64))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def is_empty(self) -> bool:
        return len(self.faces) == 0

    @property
    def triangles(self) -> np.ndarray:
        """Corner positions per face, shape (m, 3, 3)."""
        return self.vertices[self.faces]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return (
            np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.faces, other.faces)
        )

    def __hash__(self) -> int:
        return hash((self.vertices.tobytes(), self.faces.tobytes()))

    def __repr__(self) -> str:
        return f"Mesh(vertices={self.vertex_count}, faces={self.face_count})"


class Transform(BaseModel):
    """Position, Euler rotation in degrees and per-axis scale.

    Applied as scale, then rotate, then translate.
    """

    model_config = ConfigDict(frozen=True)

    position: Vector3 = (0.0, 0.0, 0.0)
    rotation: Vector3 = (0.0, 0.0, 0.0)
    scale: Vector3 = (1.0, 1.0, 1.0)

    @field_validator("position", "rotation", "scale")
    @classmethod
    def check_finite(cls, value: Vector3) -> Vector3:
        if not all(math.isfinite(component) for component in value):
            raise InvalidTransformError("transform components must be finite")
        return value

    @field_validator("scale")
    @classmethod
    def check_scale(cls, value: Vector3) -> Vector3:
        if any(component <= 0 for component in value):
            raise InvalidTransformError(f"scale components must be positive, got {value}")
        return value

    @property
    def is_identity(self) -> bool:
        return (
            self.position == (0.0, 0.0, 0.0)
            and self.rotation == (0.0, 0.0, 0.0)
            and self.scale == (1.0, 1.0, 1.0)
        )


class Aabb(BaseModel):
    """Axis-aligned bounding box."""

    model_config = ConfigDict(frozen=True)

    min: Vector3
    max: Vector3

    @model_validator(mode="after")
    def check_order(self) -> "Aabb":
        if any(lo > hi for lo, hi in zip(self.min, self.max)):
            raise InvalidArgumentError(f"AABB min {self.min} exceeds max {self.max}")
        return self

    @classmethod
    def from_points(cls, points: np.ndarray) -> "Aabb":
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        return cls(min=tuple(float(x) for x in lo), max=tuple(float(x) for x in hi))

    @property
    def size(self) -> Vector3:
        return tuple(hi - lo for lo, hi in zip(self.min, self.max))

    @property
    def center(self) -> Vector3:
        return tuple((lo + hi) / 2.0 for lo, hi in zip(self.min, self.max))

    @property
    def longest_side(self) -> float:
        return max(self.size)

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(
            min=tuple(min(a, b) for a, b in zip(self.min, other.min)),
            max=tuple(max(a, b) for a, b in zip(self.max, other.max)),
        )


class PrintabilityReport(BaseModel):
    """Outcome of the closed-surface checks a slicer depends on."""

    model_config = ConfigDict(frozen=True)

    watertight: bool
    manifold: bool
    consistent_winding: bool
    genus: int | None = None
    component_count: int
    vertex_count: int = 0
    face_count: int = 0
    boundary_edge_count: int = 0
    non_manifold_edge_count: int = 0

    @model_validator(mode="after")
    def check_genus(self) -> "PrintabilityReport":
        if self.genus is not None and not (
            self.watertight and self.manifold and self.component_count == 1
        ):
            raise InvalidArgumentError(
                "genus is only defined for a single watertight manifold component"
            )
        return self

    @property
    def is_printable(self) -> bool:
        return self.watertight and self.manifold and self.consistent_winding

    def to_lines(self) -> list[str]:
        def flag(value: bool) -> str:
            return "true" if value else "false"

        return [
            f"watertight: {flag(self.watertight)}",
            f"manifold: {flag(self.manifold)}",
            f"consistent_winding: {flag(self.consistent_winding)}",
            f"genus: {'undefined' if self.genus is None else self.genus}",
            f"component_count: {self.component_count}",
            f"boundary_edges: {self.boundary_edge_count}",
            f"non_manifold_edges: {self.non_manifold_edge_count}",
        ]


PrimitiveKind = Literal["cuboid", "ellipsoid", "cylinder", "icosphere"]


class PrimitiveSpec(BaseModel):
    """Primitive kind plus its tessellation; an empty tuple means configured defaults."""

    model_config = ConfigDict(frozen=True)

    kind: PrimitiveKind
    tessellation: tuple[int, ...] = ()

    @model_validator(mode="after")
    def check_tessellation(self) -> "PrimitiveSpec":
        params = self.tessellation
        if not params:
            return self
        if self.kind == "cuboid":
            raise InvalidArgumentError("cuboid takes no tessellation parameters")
        if self.kind == "ellipsoid":
            if len(params) != 2:
                raise InvalidArgumentError("ellipsoid tessellation is STACKS SECTORS")
            if min(params) < 3:
                raise InvalidArgumentError("ellipsoid stacks and sectors must be at least 3")
        elif self.kind == "cylinder":
            if len(params) != 1:
                raise InvalidArgumentError("cylinder tessellation is SECTORS")
            if params[0] < 3:
                raise InvalidArgumentError("cylinder sectors must be at least 3")
        elif self.kind == "icosphere":
            if len(params) != 1 or params[0] < 0:
                raise InvalidArgumentError("icosphere tessellation is a non-negative subdivision count")
        return self
