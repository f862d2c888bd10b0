"""Pydantic value types shared across MeshForge modules."""

from .geometry import (
    Aabb,
    Mesh,
    PrimitiveKind,
    PrimitiveSpec,
    PrintabilityReport,
    Transform,
    Vector3,
    freeze_array,
)
from .voxels import MatchResult, VoxelGrid
from .deform import DisplacementField
from .scene import Command, RunReport, SceneScript

__all__ = [
    # Geometry
    "Aabb",
    "Mesh",
    "PrimitiveKind",
    "PrimitiveSpec",
    "PrintabilityReport",
    "Transform",
    "Vector3",
    "freeze_array",
    # Voxels and retrieval
    "MatchResult",
    "VoxelGrid",
    # Deformation
    "DisplacementField",
    # Scene scripts
    "Command",
    "RunReport",
    "SceneScript",
]
