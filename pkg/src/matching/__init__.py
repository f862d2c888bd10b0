"""Voxelization, IoU scoring and model retrieval."""

from .voxelize import CANONICAL_ORIGIN, MIN_RESOLUTION, iou, shared_frame, voxelize
from .retrieval import (
    DatabaseEntry,
    Manifest,
    ManifestEntry,
    ModelDatabase,
    best_match,
    cache_path,
    format_matches,
)

__all__ = [
    "CANONICAL_ORIGIN",
    "MIN_RESOLUTION",
    "DatabaseEntry",
    "Manifest",
    "ManifestEntry",
    "ModelDatabase",
    "best_match",
    "cache_path",
    "format_matches",
    "iou",
    "shared_frame",
    "voxelize",
]
