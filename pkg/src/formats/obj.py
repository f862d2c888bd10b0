"""Wavefront OBJ geometry subset: ``v`` and ``f`` records."""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from src.config import settings
from src.exceptions import InvalidMeshError, ParseError
from src.models.geometry import Mesh, freeze_array


logger = logging.getLogger(__name__)

OBJ_HEADER = "# meshforge obj"


class ObjDocument(BaseModel):
    """Parsed OBJ geometry before triangulation; indices are 0-based."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: np.ndarray
    polygons: tuple[tuple[int, ...], ...] = ()
    polygon_lines: tuple[int, ...] = ()
    ignored: tuple[tuple[int, str], ...] = ()

    @field_validator("vertices", mode="before")
    @classmethod
    def coerce_vertices(cls, value) -> np.ndarray:
        return freeze_array(np.asarray(value, dtype=np.float64).reshape(-1, 3))

    def to_mesh(self) -> Mesh:
        """Fan-triangulate every polygon as (v0, vi, vi+1)."""
        faces = [
            (polygon[0], polygon[i], polygon[i + 1])
            for polygon in self.polygons
            for i in range(1, len(polygon) - 1)
        ]
        return Mesh(vertices=self.vertices, faces=np.asarray(faces, dtype=np.int64).reshape(-1, 3))


def _decode(data: str | bytes) -> str:
    if isinstance(data, str):
        return data
    try:
        return bytes(data).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("input is not valid UTF-8", offset=exc.start) from exc


def _resolve_index(token: str, vertex_count: int, line: int) -> int:
    head = token.split("/", 1)[0]
    try:
        value = int(head)
    except ValueError:
        raise ParseError(f"malformed face index '{token}'", line=line) from None
    if value == 0:
        raise ParseError("face index 0 is not valid in OBJ", line=line)
    index = value - 1 if value > 0 else vertex_count + value
    if not 0 <= index < vertex_count:
        raise ParseError(
            f"face index {value} out of range for {vertex_count} vertices", line=line
        )
    return index


def parse_obj_document(data: str | bytes) -> ObjDocument:
    """
    Parse OBJ text, keeping polygonal faces and the ignored directives.

    Args:
        data: UTF-8 text or bytes

    Returns:
        ObjDocument with 0-based indices; negative indices count back from
        the most recent vertex

    Raises:
        ParseError: With the line number of the first bad record
    """
    text = _decode(data)
    vertices: list[list[float]] = []
    polygons: list[tuple[int, ...]] = []
    polygon_lines: list[int] = []
    ignored: list[tuple[int, str]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        keyword, *args = content.split()
        if keyword == "v":
            if len(args) < 3:
                raise ParseError("vertex needs three coordinates", line=number)
            try:
                point = [float(arg) for arg in args[:3]]
            except ValueError:
                raise ParseError(f"malformed float in '{content}'", line=number) from None
            if not all(math.isfinite(c) for c in point):
                raise ParseError("vertex coordinates must be finite", line=number)
            vertices.append(point)
        elif keyword == "f":
            if len(args) < 3:
                raise ParseError("face needs at least three vertices", line=number)
            indices = tuple(_resolve_index(token, len(vertices), number) for token in args)
            if len(set(indices)) != len(indices):
                raise ParseError("face references the same vertex twice", line=number)
            polygons.append(indices)
            polygon_lines.append(number)
        else:
            ignored.append((number, keyword))
            logger.debug("line %d: ignoring '%s' directive", number, keyword)

    return ObjDocument(
        vertices=np.asarray(vertices, dtype=np.float64).reshape(-1, 3),
        polygons=tuple(polygons),
        polygon_lines=tuple(polygon_lines),
        ignored=tuple(ignored),
    )


def parse_obj(data: str | bytes) -> Mesh:
    """Parse OBJ text into a triangle mesh."""
    document = parse_obj_document(data)
    try:
        return document.to_mesh()
    except InvalidMeshError as exc:
        raise ParseError(str(exc)) from exc


def format_coordinate(value: float, digits: int | None = None) -> str:
    """Shortest decimal for ``value`` with at most ``digits`` significant digits."""
    digits = settings.OBJ_SIGNIFICANT_DIGITS if digits is None else digits
    return format(value + 0.0, f".{digits}g")


def write_obj(mesh: Mesh, digits: int | None = None) -> str:
    """
    Serialize a mesh as OBJ text with 1-based indices.

    Output depends only on the mesh, so identical meshes give identical bytes.
    """
    lines = [OBJ_HEADER]
    lines.extend(
        "v " + " ".join(format_coordinate(c, digits) for c in vertex)
        for vertex in mesh.vertices.tolist()
    )
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces.tolist())
    return "\n".join(lines) + "\n"
