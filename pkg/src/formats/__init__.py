"""Mesh and voxel file formats, dispatched by file extension."""

import logging
from pathlib import Path

from src.exceptions import InvalidArgumentError
from src.models.geometry import Mesh
from src.models.voxels import VoxelGrid
from src.utils.mesh_ops import weld

from .obj import ObjDocument, parse_obj, parse_obj_document, write_obj
from .stl import StlMode, parse_stl, write_stl
from .vox import pack_occupancy, parse_vox, unpack_occupancy, write_vox


logger = logging.getLogger(__name__)

MESH_SUFFIXES = (".obj", ".stl")


def _suffix(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix not in MESH_SUFFIXES:
        raise InvalidArgumentError(
            f"unsupported mesh format '{suffix or path.name}', expected one of {MESH_SUFFIXES}"
        )
    return suffix


def read_mesh(path: str | Path) -> Mesh:
    """
    Load an OBJ or STL file.

    STL triangle soups are welded so shared edges are recovered.

    Raises:
        InvalidArgumentError: For an unknown extension
        ParseError: For malformed content
        OSError: If the file cannot be read
    """
    path = Path(path)
    suffix = _suffix(path)
    data = path.read_bytes()
    if suffix == ".obj":
        return parse_obj(data)
    return weld(parse_stl(data))


def write_mesh(mesh: Mesh, path: str | Path, stl_mode: StlMode = "binary") -> Path:
    """Write ``mesh`` in the format named by the extension; returns the path."""
    path = Path(path)
    suffix = _suffix(path)
    payload = write_obj(mesh).encode("utf-8") if suffix == ".obj" else write_stl(mesh, stl_mode)
    path.write_bytes(payload)
    logger.debug("wrote %s (%d faces)", path.name, mesh.face_count)
    return path


def read_grid(path: str | Path) -> VoxelGrid:
    return parse_vox(Path(path).read_bytes())


def write_grid(grid: VoxelGrid, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(write_vox(grid).encode("ascii"))
    return path


__all__ = [
    "MESH_SUFFIXES",
    "ObjDocument",
    "StlMode",
    "pack_occupancy",
    "parse_obj",
    "parse_obj_document",
    "parse_stl",
    "parse_vox",
    "read_grid",
    "read_mesh",
    "unpack_occupancy",
    "write_grid",
    "write_mesh",
    "write_obj",
    "write_stl",
    "write_vox",
]
