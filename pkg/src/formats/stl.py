"""STL in ASCII and little-endian binary form.

Binary layout: 80-byte header, uint32 triangle count, then one 50-byte
record per triangle (float32 normal, three float32 vertices, uint16
attribute byte count, always 0).
"""

import logging
import math
from typing import Literal

import numpy as np

from src.exceptions import InvalidMeshError, ParseError
from src.formats.obj import format_coordinate
from src.models.geometry import Mesh


logger = logging.getLogger(__name__)

HEADER_SIZE = 80
PREAMBLE_SIZE = HEADER_SIZE + 4
RECORD = np.dtype(
    [("normal", "<f4", (3,)), ("vertices", "<f4", (3, 3)), ("attribute", "<u2")]
)
RECORD_SIZE = RECORD.itemsize
BINARY_HEADER = b"MeshForge binary STL".ljust(HEADER_SIZE, b"\0")
SOLID_NAME = "meshforge"

StlMode = Literal["ascii", "binary"]


def face_normals(mesh: Mesh) -> np.ndarray:
    """Unit normals from the winding; zero for degenerate triangles."""
    if mesh.is_empty:
        return np.zeros((0, 3))
    tri = mesh.triangles
    normals = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    lengths = np.linalg.norm(normals, axis=1)
    safe = np.where(lengths > 0, lengths, 1.0)
    return np.where(lengths[:, None] > 0, normals / safe[:, None], 0.0)


def write_stl(mesh: Mesh, mode: StlMode = "binary") -> bytes:
    """
    Serialize a mesh as STL with normals recomputed from the winding.

    Args:
        mesh: Mesh to write
        mode: "binary" (default) or "ascii"

    Returns:
        File contents
    """
    normals = face_normals(mesh)
    if mode == "binary":
        records = np.zeros(mesh.face_count, dtype=RECORD)
        records["normal"] = normals
        if mesh.face_count:
            records["vertices"] = mesh.triangles
        count = np.array([mesh.face_count], dtype="<u4").tobytes()
        return BINARY_HEADER + count + records.tobytes()
    if mode != "ascii":
        raise ValueError(f"unknown STL mode '{mode}'")

    lines = [f"solid {SOLID_NAME}"]
    for normal, triangle in zip(normals.tolist(), mesh.triangles.tolist()):
        lines.append("  facet normal " + " ".join(format_coordinate(c) for c in normal))
        lines.append("    outer loop")
        for vertex in triangle:
            lines.append("      vertex " + " ".join(format_coordinate(c) for c in vertex))
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {SOLID_NAME}")
    return ("\n".join(lines) + "\n").encode("ascii")


def _soup(corners: np.ndarray) -> Mesh:
    vertices = np.asarray(corners, dtype=np.float64).reshape(-1, 3)
    faces = np.arange(len(vertices), dtype=np.int64).reshape(-1, 3)
    return Mesh(vertices=vertices, faces=faces)


def _parse_binary(data: bytes) -> Mesh:
    if len(data) < PREAMBLE_SIZE:
        raise ParseError(
            f"truncated header: {len(data)} of {PREAMBLE_SIZE} bytes", offset=len(data)
        )
    count = int(np.frombuffer(data, dtype="<u4", count=1, offset=HEADER_SIZE)[0])
    available = (len(data) - PREAMBLE_SIZE) // RECORD_SIZE
    if available < count:
        raise ParseError(
            f"truncated payload: {count} triangles declared, {available} complete",
            offset=PREAMBLE_SIZE + available * RECORD_SIZE,
        )
    records = np.frombuffer(data, dtype=RECORD, count=count, offset=PREAMBLE_SIZE)
    corners = records["vertices"].astype(np.float64)
    if not np.all(np.isfinite(corners)):
        bad = int(np.flatnonzero(~np.isfinite(corners).reshape(count, -1).all(axis=1))[0])
        raise ParseError("non-finite vertex coordinate", offset=PREAMBLE_SIZE + bad * RECORD_SIZE)
    return _soup(corners)


def _parse_ascii(data: bytes) -> Mesh:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("ASCII STL is not valid UTF-8", offset=exc.start) from exc

    corners: list[list[float]] = []
    facet: list[list[float]] | None = None
    opened = finished = False
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        if finished:
            raise ParseError("content after endsolid", line=number)
        keyword = parts[0].lower()
        if keyword == "solid":
            if opened:
                raise ParseError("nested solid", line=number)
            opened = True
            continue
        if keyword in ("outer", "endloop"):
            continue
        if keyword == "facet":
            if facet is not None:
                raise ParseError("facet opened before the previous one closed", line=number)
            facet = []
        elif keyword == "vertex":
            if facet is None:
                raise ParseError("vertex outside a facet", line=number)
            if len(parts) != 4:
                raise ParseError("vertex needs three coordinates", line=number)
            try:
                point = [float(p) for p in parts[1:]]
            except ValueError:
                raise ParseError(f"malformed float in '{raw.strip()}'", line=number) from None
            if not all(math.isfinite(c) for c in point):
                raise ParseError("vertex coordinates must be finite", line=number)
            facet.append(point)
        elif keyword == "endfacet":
            if facet is None or len(facet) != 3:
                raise ParseError("facet must have exactly three vertices", line=number)
            corners.extend(facet)
            facet = None
        elif keyword == "endsolid":
            finished = True
        else:
            raise ParseError(f"unexpected keyword '{parts[0]}'", line=number)
    if not finished:
        raise ParseError("missing endsolid", offset=len(data))
    return _soup(np.asarray(corners, dtype=np.float64).reshape(-1, 3))


def parse_stl(data: bytes) -> Mesh:
    """
    Parse ASCII or binary STL into a triangle soup.

    Every triangle gets its own three vertices; weld to recover shared
    topology. A payload whose size matches the binary layout is read as
    binary even when its header starts with "solid".

    Raises:
        ParseError: With a byte offset (binary) or line number (ASCII)
    """
    data = bytes(data)
    if len(data) >= PREAMBLE_SIZE:
        count = int(np.frombuffer(data, dtype="<u4", count=1, offset=HEADER_SIZE)[0])
        if PREAMBLE_SIZE + count * RECORD_SIZE == len(data):
            mesh = _parse_binary(data)
            logger.debug("binary STL with %d triangles", mesh.face_count)
            return mesh
    if data.lstrip()[:5].lower() == b"solid":
        try:
            return _parse_ascii(data)
        except InvalidMeshError as exc:
            raise ParseError(str(exc)) from exc
    return _parse_binary(data)
