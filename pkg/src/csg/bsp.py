"""Binary space partitioning of convex polygons for solid booleans.

All set operations reduce to two tree primitives, ``clip_to`` (remove the
parts of one tree inside another) and ``invert`` (swap solid and empty
space). Union is::

    a.clip_to(b)
    b.clip_to(a)
    b.invert()
    b.clip_to(a)
    b.invert()
    a.build(b.all_polygons())

The invert/clip/invert step removes coplanar polygons that both solids
share, so only one copy of an overlapping face survives. Difference and
intersection follow from complements: A - B = ~(~A | B) and
A & B = ~(~A | ~B).

Traversals use explicit stacks; tree depth grows with the number of
distinct planes, which exceeds the interpreter recursion limit for finely
tessellated operands.
"""

import math
from dataclasses import dataclass

from src.config import settings


Vec3 = tuple[float, float, float]

COPLANAR = 0  # within epsilon of the plane
FRONT = 1
BACK = 2
SPANNING = 3


@dataclass(frozen=True, slots=True)
class Plane:
    """Oriented plane ``normal . p = w`` with a unit normal."""

    normal: Vec3
    w: float

    @classmethod
    def from_points(cls, a: Vec3, b: Vec3, c: Vec3) -> "Plane | None":
        """Plane through three points, or None when they are collinear."""
        ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
        vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
        nx = uy * vz - uz * vy
        ny = uz * vx - ux * vz
        nz = ux * vy - uy * vx
        length = math.sqrt(nx * nx + ny * ny + nz * nz)
        if length == 0.0:
            return None
        nx, ny, nz = nx / length, ny / length, nz / length
        return cls((nx, ny, nz), nx * a[0] + ny * a[1] + nz * a[2])

    def flipped(self) -> "Plane":
        nx, ny, nz = self.normal
        return Plane((-nx, -ny, -nz), -self.w)

    def split_polygon(
        self,
        polygon: "Polygon",
        coplanar_front: list["Polygon"],
        coplanar_back: list["Polygon"],
        front: list["Polygon"],
        back: list["Polygon"],
        epsilon: float,
    ) -> None:
        """
        Classify a polygon against this plane, splitting it when it spans.

        Coplanar polygons go to ``coplanar_front`` or ``coplanar_back``
        depending on whether their normal agrees with this plane's.
        Fragments keep the parent polygon's plane.
        """
        nx, ny, nz = self.normal
        w = self.w
        vertices = polygon.vertices
        distances = [nx * x + ny * y + nz * z - w for x, y, z in vertices]
        locations = [
            BACK if t < -epsilon else FRONT if t > epsilon else COPLANAR for t in distances
        ]
        polygon_type = 0
        for location in locations:
            polygon_type |= location

        if polygon_type == COPLANAR:
            pn = polygon.plane.normal
            if nx * pn[0] + ny * pn[1] + nz * pn[2] > 0:
                coplanar_front.append(polygon)
            else:
                coplanar_back.append(polygon)
        elif polygon_type == FRONT:
            front.append(polygon)
        elif polygon_type == BACK:
            back.append(polygon)
        else:
            f: list[Vec3] = []
            b: list[Vec3] = []
            count = len(vertices)
            for i in range(count):
                j = (i + 1) % count
                ti, tj = locations[i], locations[j]
                vi, vj = vertices[i], vertices[j]
                if ti != BACK:
                    f.append(vi)
                if ti != FRONT:
                    b.append(vi)
                if (ti | tj) == SPANNING:
                    t = distances[i] / (distances[i] - distances[j])
                    point = (
                        vi[0] + (vj[0] - vi[0]) * t,
                        vi[1] + (vj[1] - vi[1]) * t,
                        vi[2] + (vj[2] - vi[2]) * t,
                    )
                    f.append(point)
                    b.append(point)
            if len(f) >= 3:
                front.append(Polygon(f, polygon.plane))
            if len(b) >= 3:
                back.append(Polygon(b, polygon.plane))


class Polygon:
    """Convex planar polygon; vertices are position tuples."""

    __slots__ = ("vertices", "plane")

    def __init__(self, vertices: list[Vec3], plane: Plane):
        self.vertices = vertices
        self.plane = plane

    def flip(self) -> None:
        self.vertices.reverse()
        self.plane = self.plane.flipped()

    def __repr__(self) -> str:
        return f"Polygon({len(self.vertices)} vertices, {self.plane})"


class BspNode:
    """
    Node of a non-leafy BSP tree.

    ``polygons`` holds the polygons coplanar with ``plane`` in either
    orientation; everything else lives in the front or back subtree.
    """

    __slots__ = ("plane", "front", "back", "polygons", "epsilon")

    def __init__(self, polygons: list[Polygon] | None = None, epsilon: float | None = None):
        self.plane: Plane | None = None
        self.front: BspNode | None = None
        self.back: BspNode | None = None
        self.polygons: list[Polygon] = []
        self.epsilon = settings.CSG_EPSILON if epsilon is None else epsilon
        if polygons:
            self.build(polygons)

    def nodes(self):
        """Yield every node of the subtree, parents before children."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if node.back is not None:
                stack.append(node.back)
            if node.front is not None:
                stack.append(node.front)

    def invert(self) -> None:
        """Swap solid and empty space."""
        for node in list(self.nodes()):
            for polygon in node.polygons:
                polygon.flip()
            if node.plane is not None:
                node.plane = node.plane.flipped()
            node.front, node.back = node.back, node.front

    def clip_polygons(self, polygons: list[Polygon]) -> list[Polygon]:
        """Remove the parts of ``polygons`` that lie inside this tree."""
        result: list[Polygon] = []
        stack = [(self, polygons)]
        while stack:
            node, pending = stack.pop()
            if node.plane is None:
                result.extend(pending)
                continue
            front: list[Polygon] = []
            back: list[Polygon] = []
            for polygon in pending:
                node.plane.split_polygon(polygon, front, back, front, back, node.epsilon)
            if node.back is not None and back:
                stack.append((node.back, back))
            if node.front is not None:
                if front:
                    stack.append((node.front, front))
            else:
                result.extend(front)
        return result

    def clip_to(self, other: "BspNode") -> None:
        """Remove every polygon of this tree that lies inside ``other``."""
        for node in self.nodes():
            node.polygons = other.clip_polygons(node.polygons)

    def all_polygons(self) -> list[Polygon]:
        polygons: list[Polygon] = []
        for node in self.nodes():
            polygons.extend(node.polygons)
        return polygons

    def build(self, polygons: list[Polygon]) -> None:
        """
        Insert polygons, splitting by the first polygon's plane at each empty node.

        On an existing tree the polygons filter down to the leaves and become
        new nodes there.
        """
        stack = [(self, polygons)]
        while stack:
            node, pending = stack.pop()
            if not pending:
                continue
            if node.plane is None:
                node.plane = pending[0].plane
            front: list[Polygon] = []
            back: list[Polygon] = []
            for polygon in pending:
                node.plane.split_polygon(
                    polygon, node.polygons, node.polygons, front, back, node.epsilon
                )
            if front:
                if node.front is None:
                    node.front = BspNode(epsilon=node.epsilon)
                stack.append((node.front, front))
            if back:
                if node.back is None:
                    node.back = BspNode(epsilon=node.epsilon)
                stack.append((node.back, back))
