"""Mesh measurements, transforms, resizing and printability checks."""

import logging
import math
from collections import defaultdict
from typing import NamedTuple, Sequence

import numpy as np

from src.config import settings
from src.exceptions import (
    EmptyMeshError,
    InvalidArgumentError,
    TopologyUndefinedError,
    UndefinedVolumeError,
)
from src.models.geometry import Aabb, Mesh, PrintabilityReport, Transform, Vector3


logger = logging.getLogger(__name__)


def rotation_matrix(rotation: Sequence[float]) -> np.ndarray:
    """
    Build the rotation matrix for Euler angles in degrees.

    Rotation is about Z first, then X, then Y (R = Ry @ Rx @ Rz), for
    column vectors in a right-handed frame.

    Args:
        rotation: Angles about x, y and z in degrees

    Returns:
        3x3 rotation matrix
    """
    rx, ry, rz = (math.radians(angle) for angle in rotation)
    cx, sx = math.cos(rx), math.sin(rx)
    cy, sy = math.cos(ry), math.sin(ry)
    cz, sz = math.cos(rz), math.sin(rz)
    rot_x = np.array([[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]])
    rot_y = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rot_z = np.array([[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]])
    return rot_y @ rot_x @ rot_z


def apply_transform(mesh: Mesh, transform: Transform) -> Mesh:
    """
    Scale, rotate, then translate every vertex.

    Args:
        mesh: Input mesh
        transform: Validated TRS record (scale components are positive)

    Returns:
        New mesh sharing the input's face array
    """
    vertices = mesh.vertices * np.asarray(transform.scale)
    if any(transform.rotation):
        vertices = vertices @ rotation_matrix(transform.rotation).T
    if any(transform.position):
        vertices = vertices + np.asarray(transform.position)
    return Mesh(vertices=vertices, faces=mesh.faces)


def bounding_box(mesh: Mesh) -> Aabb:
    """Axis-aligned bounds of all vertex positions."""
    if mesh.vertex_count == 0:
        raise EmptyMeshError("mesh has no vertices")
    return Aabb.from_points(mesh.vertices)


def bounding_dimensions(mesh: Mesh) -> tuple[Vector3, Aabb]:
    """
    Measure width, height and depth of a mesh.

    Args:
        mesh: Mesh with at least one vertex

    Returns:
        Tuple of ((width, height, depth) in meters, bounding box)

    Raises:
        EmptyMeshError: If the mesh has no vertices
    """
    aabb = bounding_box(mesh)
    return aabb.size, aabb


def _positive_vector(values: Sequence[float], label: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.shape != (3,):
        raise InvalidArgumentError(f"{label} must have three components")
    if not np.all(np.isfinite(array)) or np.any(array <= 0):
        raise InvalidArgumentError(f"{label} must be positive, got {tuple(array.tolist())}")
    return array


def resize(mesh: Mesh, factors: Sequence[float]) -> Mesh:
    """
    Scale a mesh per axis about its bounding-box center.

    Args:
        mesh: Non-empty mesh
        factors: Positive scale factor per axis

    Returns:
        Resized mesh with unchanged topology

    Raises:
        InvalidArgumentError: If any factor is zero, negative or not finite
        EmptyMeshError: If the mesh has no vertices
    """
    scale = _positive_vector(factors, "resize factors")
    center = np.asarray(bounding_box(mesh).center)
    if np.all(scale == 1.0):
        return mesh
    vertices = center + (mesh.vertices - center) * scale
    return Mesh(vertices=vertices, faces=mesh.faces)


def resize_to(mesh: Mesh, target_dims: Sequence[float]) -> Mesh:
    """
    Resize a mesh so its bounding box has the requested dimensions.

    Args:
        mesh: Non-empty mesh with non-zero extent on every axis
        target_dims: Desired (width, height, depth) in meters

    Returns:
        Resized mesh

    Raises:
        InvalidArgumentError: If a target is not positive or an extent is zero
        EmptyMeshError: If the mesh has no vertices
    """
    target = _positive_vector(target_dims, "target dimensions")
    size = np.asarray(bounding_box(mesh).size)
    if np.any(size <= 0):
        raise InvalidArgumentError(f"cannot resize a mesh with a flat extent {tuple(size.tolist())}")
    return resize(mesh, target / size)


class EdgeStats(NamedTuple):
    """Undirected edge census of a face array."""

    edge_count: int
    boundary_edges: int
    non_manifold_edges: int
    consistent_winding: bool

    @property
    def watertight(self) -> bool:
        return self.boundary_edges == 0 and self.non_manifold_edges == 0


def edge_stats(mesh: Mesh) -> EdgeStats:
    """Count distinct edges and classify them by how many faces they bound."""
    faces = mesh.faces
    if len(faces) == 0:
        return EdgeStats(0, 0, 0, True)
    n = np.int64(max(mesh.vertex_count, 1))
    directed = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    directed_keys = directed[:, 0] * n + directed[:, 1]
    lo = directed.min(axis=1)
    hi = directed.max(axis=1)
    _, counts = np.unique(lo * n + hi, return_counts=True)
    return EdgeStats(
        edge_count=len(counts),
        boundary_edges=int(np.count_nonzero(counts == 1)),
        non_manifold_edges=int(np.count_nonzero(counts > 2)),
        consistent_winding=len(np.unique(directed_keys)) == len(directed_keys),
    )


def vertex_stars_are_disks(mesh: Mesh) -> bool:
    """True when the faces around every vertex form a single fan or cycle."""
    links: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a, b, c in mesh.faces.tolist():
        links[a].append((b, c))
        links[b].append((c, a))
        links[c].append((a, b))

    for edges in links.values():
        adjacency: dict[int, list[int]] = defaultdict(list)
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        if any(len(neighbours) > 2 for neighbours in adjacency.values()):
            return False
        start = edges[0][0]
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for neighbour in adjacency[node]:
                if neighbour not in seen:
                    seen.add(neighbour)
                    stack.append(neighbour)
        if len(seen) != len(adjacency):
            return False
    return True


def component_count(mesh: Mesh) -> int:
    """Number of face-connected components; unreferenced vertices are ignored."""
    if mesh.is_empty:
        return 0
    parent = list(range(mesh.vertex_count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b, c in mesh.faces.tolist():
        ra = find(a)
        for other in (b, c):
            ro = find(other)
            if ro != ra:
                parent[ro] = ra
    return len({find(int(i)) for i in np.unique(mesh.faces)})


def signed_volume(mesh: Mesh) -> float:
    """
    Enclosed volume as a sum of signed tetrahedra against the origin.

    Args:
        mesh: Watertight mesh with consistent winding

    Returns:
        Volume in cubic meters, positive for outward winding

    Raises:
        UndefinedVolumeError: If the mesh is open or inconsistently wound
    """
    stats = edge_stats(mesh)
    if not stats.watertight:
        raise UndefinedVolumeError(
            f"volume undefined: {stats.boundary_edges} boundary and "
            f"{stats.non_manifold_edges} non-manifold edges"
        )
    if not stats.consistent_winding:
        raise UndefinedVolumeError("volume undefined: inconsistent face winding")
    if mesh.is_empty:
        return 0.0
    tri = mesh.triangles
    determinants = np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2]))
    return float(determinants.sum() / 6.0)


def _genus_from_counts(mesh: Mesh, stats: EdgeStats) -> int:
    vertex_total = len(np.unique(mesh.faces))
    euler = vertex_total - stats.edge_count + mesh.face_count
    if (2 - euler) % 2:
        raise TopologyUndefinedError("manifold", f"odd Euler characteristic {euler}")
    return (2 - euler) // 2


def euler_genus(mesh: Mesh) -> int:
    """
    Genus of a closed surface from its Euler characteristic.

    Edges are distinct undirected index pairs; coincident vertices are not
    merged, so weld CSG output first.

    Args:
        mesh: Watertight, manifold, single-component mesh

    Returns:
        Genus g = (2 - V + E - F) / 2

    Raises:
        TopologyUndefinedError: Naming the first failed check
    """
    stats = edge_stats(mesh)
    if stats.boundary_edges:
        raise TopologyUndefinedError(
            "watertight", f"mesh has {stats.boundary_edges} boundary edges"
        )
    if stats.non_manifold_edges or not vertex_stars_are_disks(mesh):
        raise TopologyUndefinedError("manifold", "mesh is not manifold")
    components = component_count(mesh)
    if components != 1:
        raise TopologyUndefinedError(
            "component_count", f"genus needs one component, mesh has {components}"
        )
    return _genus_from_counts(mesh, stats)


def validate_printable(mesh: Mesh) -> PrintabilityReport:
    """Run every closed-surface check and collect the results."""
    stats = edge_stats(mesh)
    manifold = stats.non_manifold_edges == 0 and vertex_stars_are_disks(mesh)
    components = component_count(mesh)
    genus = None
    if stats.watertight and manifold and components == 1:
        try:
            genus = _genus_from_counts(mesh, stats)
        except TopologyUndefinedError:
            genus = None
    return PrintabilityReport(
        watertight=stats.watertight,
        manifold=manifold,
        consistent_winding=stats.consistent_winding,
        genus=genus,
        component_count=components,
        vertex_count=mesh.vertex_count,
        face_count=mesh.face_count,
        boundary_edge_count=stats.boundary_edges,
        non_manifold_edge_count=stats.non_manifold_edges,
    )


def flip_winding(mesh: Mesh) -> Mesh:
    """Reverse the orientation of every face."""
    return Mesh(vertices=mesh.vertices, faces=mesh.faces[:, ::-1])


_NEIGHBOUR_OFFSETS = [
    (dx, dy, dz) for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
]


def weld(mesh: Mesh, epsilon: float | None = None) -> Mesh:
    """
    Merge vertices closer than epsilon.

    The first vertex of each cluster keeps its position. Faces that collapse
    are dropped and vertices no face references are discarded.

    Args:
        mesh: Input mesh
        epsilon: Merge distance in meters (defaults to settings.WELD_EPSILON)

    Returns:
        Welded mesh

    Raises:
        InvalidArgumentError: If epsilon is not positive
    """
    eps = settings.WELD_EPSILON if epsilon is None else epsilon
    if not eps > 0:
        raise InvalidArgumentError(f"weld epsilon must be positive, got {eps}")

    positions = mesh.vertices.tolist()
    cells = np.floor(mesh.vertices / eps).astype(np.int64).tolist()
    eps_sq = eps * eps
    grid: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    kept: list[list[float]] = []
    remap = np.empty(mesh.vertex_count, dtype=np.int64)

    for index, (point, cell) in enumerate(zip(positions, cells)):
        target = _find_neighbour(point, cell, grid, kept, eps_sq)
        if target < 0:
            target = len(kept)
            kept.append(point)
            grid[tuple(cell)].append(target)
        remap[index] = target

    faces = remap[mesh.faces] if mesh.face_count else mesh.faces
    if len(faces):
        valid = (faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2]) & (faces[:, 2] != faces[:, 0])
        dropped = int(np.count_nonzero(~valid))
        if dropped:
            logger.info("weld dropped %d collapsed faces", dropped)
        faces = faces[valid]
    return compact(np.asarray(kept, dtype=np.float64).reshape(-1, 3), faces)


def _find_neighbour(point, cell, grid, kept, eps_sq) -> int:
    x, y, z = point
    cx, cy, cz = cell
    for dx, dy, dz in _NEIGHBOUR_OFFSETS:
        for candidate in grid.get((cx + dx, cy + dy, cz + dz), ()):
            qx, qy, qz = kept[candidate]
            if (x - qx) ** 2 + (y - qy) ** 2 + (z - qz) ** 2 <= eps_sq:
                return candidate
    return -1


def compact(vertices: np.ndarray, faces: np.ndarray) -> Mesh:
    """Drop unreferenced vertices, keeping the order of the rest."""
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    used = np.zeros(len(vertices), dtype=bool)
    used[faces.ravel()] = True
    new_index = np.cumsum(used) - 1
    return Mesh(vertices=vertices[used], faces=new_index[faces])
