"""Union, difference and intersection of closed triangle meshes."""

import logging
from typing import Callable

import numpy as np

from src.config import settings
from src.csg.bsp import BspNode, Plane, Polygon
from src.exceptions import InvalidOperandError
from src.models.geometry import Mesh
from src.utils.mesh_ops import compact, edge_stats, weld


logger = logging.getLogger(__name__)

MAX_REPAIR_PASSES = 16


def _check_operand(mesh: Mesh, label: str) -> None:
    stats = edge_stats(mesh)
    if not stats.watertight:
        raise InvalidOperandError(
            f"operand {label} is not watertight "
            f"({stats.boundary_edges} boundary, {stats.non_manifold_edges} non-manifold edges)"
        )
    if not stats.consistent_winding:
        raise InvalidOperandError(f"operand {label} has inconsistent winding")


def mesh_to_polygons(mesh: Mesh) -> list[Polygon]:
    """One polygon per non-degenerate triangle."""
    vertices = [tuple(v) for v in mesh.vertices.tolist()]
    polygons = []
    for a, b, c in mesh.faces.tolist():
        corners = [vertices[a], vertices[b], vertices[c]]
        plane = Plane.from_points(*corners)
        if plane is not None:
            polygons.append(Polygon(corners, plane))
    return polygons


def _triangle_area(a, b, c) -> float:
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    return 0.5 * (cx * cx + cy * cy + cz * cz) ** 0.5


def _points_on_segment(vertices: np.ndarray, a: int, b: int, tolerance: float) -> list[int]:
    """Vertices strictly inside segment a-b within tolerance, ordered from a to b."""
    start = vertices[a]
    direction = vertices[b] - start
    length_sq = float(direction @ direction)
    if length_sq <= tolerance * tolerance:
        return []
    offsets = vertices - start
    t = offsets @ direction / length_sq
    perpendicular = offsets - np.outer(t, direction)
    distance_sq = np.einsum("ij,ij->i", perpendicular, perpendicular)
    length = length_sq ** 0.5
    margin = tolerance / length
    mask = (t > margin) & (t < 1.0 - margin) & (distance_sq <= tolerance * tolerance)
    mask[a] = False
    mask[b] = False
    candidates = np.flatnonzero(mask)
    return [int(i) for i in candidates[np.argsort(t[candidates], kind="stable")]]


def repair_t_junctions(vertices: np.ndarray, faces: list[tuple[int, int, int]], tolerance: float):
    """
    Split triangles whose open edges pass through other vertices.

    BSP clipping splits a polygon without splitting its neighbours across
    the same edge; the seam then has a vertex on one side only. Each open
    directed edge carrying such vertices is subdivided and its triangle
    re-fanned from the opposite corner.
    """
    for repair_pass in range(MAX_REPAIR_PASSES):
        directed = set()
        for a, b, c in faces:
            directed.update(((a, b), (b, c), (c, a)))

        splits: dict[tuple[int, int], list[int]] = {}
        for a, b, c in faces:
            for edge in ((a, b), (b, c), (c, a)):
                if (edge[1], edge[0]) in directed or edge in splits:
                    continue
                inner = _points_on_segment(vertices, edge[0], edge[1], tolerance)
                if inner:
                    splits[edge] = inner
        if not splits:
            return faces
        logger.debug("t-junction pass %d splits %d edges", repair_pass + 1, len(splits))

        refined = []
        for a, b, c in faces:
            for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
                inner = splits.get((p, q))
                if inner:
                    # apex on its own base: a sliver, the neighbours close the gap
                    if r not in inner:
                        chain = [p, *inner, q]
                        refined.extend((chain[i], chain[i + 1], r) for i in range(len(chain) - 1))
                    break
            else:
                refined.append((a, b, c))
        faces = refined
    logger.warning("t-junction repair stopped after %d passes", MAX_REPAIR_PASSES)
    return faces


def polygons_to_mesh(
    polygons: list[Polygon],
    weld_epsilon: float | None = None,
    min_area: float | None = None,
) -> Mesh:
    """
    Fan-triangulate polygons into a welded, T-junction-free mesh.

    Triangles under ``min_area`` are dropped before welding.
    """
    weld_epsilon = settings.WELD_EPSILON if weld_epsilon is None else weld_epsilon
    min_area = settings.DEGENERATE_AREA if min_area is None else min_area

    corners = []
    for polygon in polygons:
        points = polygon.vertices
        for i in range(1, len(points) - 1):
            triangle = (points[0], points[i], points[i + 1])
            if _triangle_area(*triangle) >= min_area:
                corners.extend(triangle)
    if not corners:
        return Mesh.empty()

    soup = Mesh(
        vertices=np.asarray(corners, dtype=np.float64),
        faces=np.arange(len(corners), dtype=np.int64).reshape(-1, 3),
    )
    welded = weld(soup, weld_epsilon)
    faces = [tuple(face) for face in welded.faces.tolist()]
    faces = repair_t_junctions(welded.vertices, faces, weld_epsilon)
    return compact(np.array(welded.vertices), np.asarray(faces, dtype=np.int64).reshape(-1, 3))


def _run(
    a: Mesh,
    b: Mesh,
    steps: Callable[[BspNode, BspNode], list[Polygon]],
    label: str,
    epsilon: float | None,
) -> Mesh:
    tree_a = BspNode(mesh_to_polygons(a), epsilon)
    tree_b = BspNode(mesh_to_polygons(b), epsilon)
    result = polygons_to_mesh(steps(tree_a, tree_b))
    logger.debug(
        "%s: %d + %d faces -> %d faces", label, a.face_count, b.face_count, result.face_count
    )
    return result


def _union_steps(a: BspNode, b: BspNode) -> list[Polygon]:
    a.clip_to(b)
    b.clip_to(a)
    b.invert()
    b.clip_to(a)
    b.invert()
    a.build(b.all_polygons())
    return a.all_polygons()


def _difference_steps(a: BspNode, b: BspNode) -> list[Polygon]:
    a.invert()
    a.clip_to(b)
    b.clip_to(a)
    b.invert()
    b.clip_to(a)
    b.invert()
    a.build(b.all_polygons())
    a.invert()
    return a.all_polygons()


def _intersection_steps(a: BspNode, b: BspNode) -> list[Polygon]:
    a.invert()
    b.clip_to(a)
    b.invert()
    a.clip_to(b)
    b.clip_to(a)
    a.build(b.all_polygons())
    a.invert()
    return a.all_polygons()


def union(a: Mesh, b: Mesh, epsilon: float | None = None) -> Mesh:
    """
    Point-set union of two closed meshes.

    Args:
        a: Watertight, consistently wound mesh
        b: Watertight, consistently wound mesh
        epsilon: Plane classification tolerance (defaults to settings.CSG_EPSILON)

    Returns:
        Welded, watertight union

    Raises:
        InvalidOperandError: If an operand is open or inconsistently wound
    """
    _check_operand(a, "a")
    _check_operand(b, "b")
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return _run(a, b, _union_steps, "union", epsilon)


def difference(a: Mesh, b: Mesh, epsilon: float | None = None) -> Mesh:
    """Point-set difference ``a - b``; operands as for :func:`union`."""
    _check_operand(a, "a")
    _check_operand(b, "b")
    if a.is_empty or b.is_empty:
        return a
    return _run(a, b, _difference_steps, "difference", epsilon)


def intersection(a: Mesh, b: Mesh, epsilon: float | None = None) -> Mesh:
    """Point-set intersection; operands as for :func:`union`."""
    _check_operand(a, "a")
    _check_operand(b, "b")
    if a.is_empty or b.is_empty:
        return Mesh.empty()
    return _run(a, b, _intersection_steps, "intersection", epsilon)


CSG_OPERATIONS: dict[str, Callable[[Mesh, Mesh], Mesh]] = {
    "add": union,
    "subtract": difference,
    "intersect": intersection,
}
