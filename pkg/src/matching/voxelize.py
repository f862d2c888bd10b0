"""Ray-parity voxelization and voxel intersection over union."""

import logging
import math
from typing import Literal

import numpy as np

from src.config import settings
from src.exceptions import IncompatibleGridsError, InvalidArgumentError, InvalidOperandError
from src.models.geometry import Aabb, Mesh
from src.models.voxels import VoxelGrid
from src.utils.mesh_ops import bounding_box, edge_stats


logger = logging.getLogger(__name__)

MIN_RESOLUTION = 4
CANONICAL_ORIGIN = (-0.5, -0.5, -0.5)

# irrational ray offsets along y and z
_JITTER_Y = math.sqrt(2.0) - 1.0
_JITTER_Z = (math.sqrt(5.0) - 1.0) / 2.0

Frame = Literal["canonical"] | Aabb


def shared_frame(aabb: Aabb, resolution: int) -> tuple[tuple[float, float, float], float, tuple[int, int, int]]:
    """Origin, cell size and dims covering ``aabb`` with ``resolution`` cells on its longest side."""
    longest = aabb.longest_side
    if longest <= 0:
        raise InvalidArgumentError("shared frame needs a box with non-zero extent")
    cell = longest / resolution
    dims = tuple(max(1, math.ceil(extent / cell - 1e-9)) for extent in aabb.size)
    return tuple(aabb.min), cell, dims


def _parity_fill(
    triangles: np.ndarray,
    origin: tuple[float, float, float],
    cell: float,
    dims: tuple[int, int, int],
    jitter: float,
) -> np.ndarray:
    """
    Classify cell centers by counting +x ray crossings.

    One ray runs along x through each (y, z) column of cell centers. Each
    hit toggles every cell whose center lies beyond it, so a cumulative sum
    of hit markers gives the crossing count per cell.
    """
    nx, ny, nz = dims
    ox, oy, oz = origin
    ray_y = oy + (np.arange(ny) + 0.5) * cell + jitter * cell * _JITTER_Y
    ray_z = oz + (np.arange(nz) + 0.5) * cell + jitter * cell * _JITTER_Z
    hits = np.zeros((ny, nz, nx + 1), dtype=np.int32)

    for a, b, c in triangles:
        ys = (a[1], b[1], c[1])
        zs = (a[2], b[2], c[2])
        j0 = max(0, math.ceil((min(ys) - ray_y[0]) / cell) - 1)
        j1 = min(ny - 1, math.floor((max(ys) - ray_y[0]) / cell) + 1)
        k0 = max(0, math.ceil((min(zs) - ray_z[0]) / cell) - 1)
        k1 = min(nz - 1, math.floor((max(zs) - ray_z[0]) / cell) + 1)
        if j0 > j1 or k0 > k1:
            continue
        det = (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1])
        if det == 0.0:
            continue  # parallel to the rays
        py = ray_y[j0:j1 + 1, None]
        pz = ray_z[None, k0:k1 + 1]
        u = ((b[1] - py) * (c[2] - pz) - (b[2] - pz) * (c[1] - py)) / det
        v = ((c[1] - py) * (a[2] - pz) - (c[2] - pz) * (a[1] - py)) / det
        w = ((a[1] - py) * (b[2] - pz) - (a[2] - pz) * (b[1] - py)) / det
        inside = (u >= 0) & (v >= 0) & (w >= 0)
        if not inside.any():
            continue
        x_hit = u * a[0] + v * b[0] + w * c[0]
        first = np.floor((x_hit - ox) / cell - 0.5).astype(np.int64) + 1
        first = np.clip(first, 0, nx)
        jj, kk = np.nonzero(inside)
        np.add.at(hits, (jj + j0, kk + k0, first[jj, kk]), 1)

    crossings = np.cumsum(hits, axis=2)[:, :, :nx]
    return (crossings % 2 == 1).transpose(2, 0, 1)


def voxelize(mesh: Mesh, resolution: int | None = None, frame: Frame = "canonical") -> VoxelGrid:
    """
    Sample a closed mesh's interior at cell centers.

    Args:
        mesh: Watertight mesh
        resolution: Cells along the longest side (defaults to settings.VOXEL_RESOLUTION)
        frame: "canonical" scales the mesh uniformly so its longest side
            spans CANONICAL_FILL of the unit cube centered at the origin;
            an Aabb places the grid over that box with the mesh unscaled

    Returns:
        VoxelGrid indexed [x, y, z]

    Raises:
        InvalidArgumentError: If resolution < 4
        InvalidOperandError: If the mesh is empty or not watertight
    """
    resolution = settings.VOXEL_RESOLUTION if resolution is None else resolution
    if resolution < MIN_RESOLUTION:
        raise InvalidArgumentError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    if mesh.is_empty:
        raise InvalidOperandError("cannot voxelize an empty mesh")
    stats = edge_stats(mesh)
    if not stats.watertight:
        raise InvalidOperandError(
            f"cannot voxelize an open mesh ({stats.boundary_edges} boundary edges)"
        )

    triangles = mesh.triangles
    if isinstance(frame, Aabb):
        origin, cell, dims = shared_frame(frame, resolution)
    elif frame == "canonical":
        box = bounding_box(mesh)
        if box.longest_side <= 0:
            raise InvalidOperandError("cannot voxelize a mesh with zero extent")
        scale = settings.CANONICAL_FILL / box.longest_side
        triangles = (triangles - np.asarray(box.center)) * scale
        origin, cell, dims = CANONICAL_ORIGIN, 1.0 / resolution, (resolution,) * 3
    else:
        raise InvalidArgumentError(f"unknown voxel frame {frame!r}")

    occupancy = _parity_fill(triangles, origin, cell, dims, settings.RAY_JITTER)
    grid = VoxelGrid(origin=origin, cell_size=cell, dims=dims, occupancy=occupancy)
    logger.debug("voxelized %d faces into %s", mesh.face_count, grid)
    return grid


def iou(a: VoxelGrid, b: VoxelGrid) -> float:
    """
    Intersection over union of two grids in the same frame.

    Returns:
        |a and b| / |a or b|, or 1.0 when both are empty

    Raises:
        IncompatibleGridsError: If dims, origin or cell size differ
    """
    if not a.same_frame(b):
        raise IncompatibleGridsError(f"grids are in different frames: {a!r} vs {b!r}")
    union = int(np.count_nonzero(a.occupancy | b.occupancy))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(a.occupancy & b.occupancy)) / union
