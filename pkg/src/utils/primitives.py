"""Unit-sized primitive solids centered at the origin.

Every primitive fits in [-0.5, 0.5]^3 with outward (counter-clockwise)
winding; placement and sizing go through a Transform.
"""

import math

import numpy as np

from src.config import settings
from src.exceptions import InvalidArgumentError
from src.models.geometry import Mesh, PrimitiveSpec


RADIUS = 0.5

# Cube corners indexed by bits (x, y, z); quads wound outward.
_CUBE_QUADS = (
    (0, 4, 6, 2),  # -x
    (1, 3, 7, 5),  # +x
    (0, 1, 5, 4),  # -y
    (2, 6, 7, 3),  # +y
    (0, 2, 3, 1),  # -z
    (4, 5, 7, 6),  # +z
)


def make_cuboid() -> Mesh:
    """Unit cube: 8 vertices, 12 triangles."""
    vertices = np.array(
        [
            [RADIUS if i & 1 else -RADIUS, RADIUS if i & 2 else -RADIUS, RADIUS if i & 4 else -RADIUS]
            for i in range(8)
        ]
    )
    faces = []
    for a, b, c, d in _CUBE_QUADS:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return Mesh(vertices=vertices, faces=faces)


def _ring(count: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * math.pi * np.arange(count) / count
    return np.cos(theta), np.sin(theta)


def make_ellipsoid(stacks: int | None = None, sectors: int | None = None) -> Mesh:
    """
    UV sphere of unit diameter with poles on the y axis.

    Args:
        stacks: Latitude bands, at least 3 (defaults to settings.ELLIPSOID_STACKS)
        sectors: Longitude sectors, at least 3 (defaults to settings.ELLIPSOID_SECTORS)

    Returns:
        Mesh with sectors*(stacks-1)+2 vertices and 2*sectors*(stacks-1) faces

    Raises:
        InvalidArgumentError: If stacks or sectors is below 3
    """
    stacks = settings.ELLIPSOID_STACKS if stacks is None else stacks
    sectors = settings.ELLIPSOID_SECTORS if sectors is None else sectors
    if stacks < 3 or sectors < 3:
        raise InvalidArgumentError(
            f"ellipsoid needs stacks >= 3 and sectors >= 3, got {stacks}x{sectors}"
        )

    cos_t, sin_t = _ring(sectors)
    vertices = [np.array([[0.0, RADIUS, 0.0]])]
    for i in range(1, stacks):
        phi = math.pi * i / stacks
        r = RADIUS * math.sin(phi)
        y = np.full(sectors, RADIUS * math.cos(phi))
        vertices.append(np.column_stack([r * cos_t, y, r * sin_t]))
    vertices.append(np.array([[0.0, -RADIUS, 0.0]]))

    south = 1 + (stacks - 1) * sectors

    def ring_index(i: int, j: int) -> int:
        return 1 + (i - 1) * sectors + j % sectors

    faces = []
    for j in range(sectors):
        faces.append((0, ring_index(1, j + 1), ring_index(1, j)))
    for i in range(1, stacks - 1):
        for j in range(sectors):
            a, d = ring_index(i, j), ring_index(i, j + 1)
            b, c = ring_index(i + 1, j), ring_index(i + 1, j + 1)
            faces.append((a, d, c))
            faces.append((a, c, b))
    for j in range(sectors):
        faces.append((south, ring_index(stacks - 1, j), ring_index(stacks - 1, j + 1)))

    return Mesh(vertices=np.vstack(vertices), faces=faces)


def make_cylinder(sectors: int | None = None) -> Mesh:
    """
    Capped cylinder of unit diameter and height along the y axis.

    Caps are triangle fans around a center vertex.

    Args:
        sectors: Sides of the prism, at least 3 (defaults to settings.CYLINDER_SECTORS)

    Returns:
        Mesh with 2*sectors+2 vertices and 4*sectors faces

    Raises:
        InvalidArgumentError: If sectors is below 3
    """
    sectors = settings.CYLINDER_SECTORS if sectors is None else sectors
    if sectors < 3:
        raise InvalidArgumentError(f"cylinder needs sectors >= 3, got {sectors}")

    cos_t, sin_t = _ring(sectors)
    top = np.column_stack([RADIUS * cos_t, np.full(sectors, RADIUS), RADIUS * sin_t])
    bottom = np.column_stack([RADIUS * cos_t, np.full(sectors, -RADIUS), RADIUS * sin_t])
    vertices = np.vstack([[[0.0, RADIUS, 0.0], [0.0, -RADIUS, 0.0]], top, bottom])

    def t(j: int) -> int:
        return 2 + j % sectors

    def b(j: int) -> int:
        return 2 + sectors + j % sectors

    faces = []
    for j in range(sectors):
        faces.append((0, t(j + 1), t(j)))
        faces.append((1, b(j), b(j + 1)))
        faces.append((t(j), t(j + 1), b(j + 1)))
        faces.append((t(j), b(j + 1), b(j)))
    return Mesh(vertices=vertices, faces=faces)


_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

_ICOSAHEDRON_VERTICES = (
    (-1, _GOLDEN, 0), (1, _GOLDEN, 0), (-1, -_GOLDEN, 0), (1, -_GOLDEN, 0),
    (0, -1, _GOLDEN), (0, 1, _GOLDEN), (0, -1, -_GOLDEN), (0, 1, -_GOLDEN),
    (_GOLDEN, 0, -1), (_GOLDEN, 0, 1), (-_GOLDEN, 0, -1), (-_GOLDEN, 0, 1),
)

_ICOSAHEDRON_FACES = (
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
)


def make_icosphere(subdivisions: int | None = None) -> Mesh:
    """
    Geodesic sphere of unit diameter from a subdivided icosahedron.

    Each subdivision splits every triangle into four, so the vertex count is
    10 * 4**subdivisions + 2 (642 after three).

    Raises:
        InvalidArgumentError: If subdivisions is negative
    """
    subdivisions = settings.ICOSPHERE_SUBDIVISIONS if subdivisions is None else subdivisions
    if subdivisions < 0:
        raise InvalidArgumentError(f"subdivisions must be non-negative, got {subdivisions}")

    points = [np.asarray(v, dtype=np.float64) for v in _ICOSAHEDRON_VERTICES]
    points = [p / np.linalg.norm(p) for p in points]
    faces = list(_ICOSAHEDRON_FACES)

    for _ in range(subdivisions):
        midpoints: dict[tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (i, j) if i < j else (j, i)
            if key not in midpoints:
                m = points[i] + points[j]
                points.append(m / np.linalg.norm(m))
                midpoints[key] = len(points) - 1
            return midpoints[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = refined

    return Mesh(vertices=np.array(points) * RADIUS, faces=faces)


def make_primitive(spec: PrimitiveSpec) -> Mesh:
    """Build the primitive a PrimitiveSpec describes, falling back to configured tessellation."""
    params = spec.tessellation
    if spec.kind == "cuboid":
        return make_cuboid()
    if spec.kind == "ellipsoid":
        return make_ellipsoid(*params) if params else make_ellipsoid()
    if spec.kind == "cylinder":
        return make_cylinder(*params) if params else make_cylinder()
    return make_icosphere(*params) if params else make_icosphere()
