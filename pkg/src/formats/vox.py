"""MeshForge voxel grid text format.

::

    MESHFORGE-VOX 1
    dims 32 32 32
    origin -0.5 -0.5 -0.5
    cell_size 0.03125
    occupancy
    <packbits hex of the C-order occupancy, 64 characters per line>
"""

import math

import numpy as np

from src.exceptions import InvalidArgumentError, ParseError
from src.models.voxels import VoxelGrid


VOX_MAGIC = "MESHFORGE-VOX 1"
HEX_LINE_WIDTH = 64


def pack_occupancy(occupancy: np.ndarray) -> str:
    """Hex string of the C-order occupancy bits, most significant bit first."""
    return np.packbits(np.asarray(occupancy, dtype=bool).ravel(order="C")).tobytes().hex()


def unpack_occupancy(packed: str, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`pack_occupancy`."""
    count = math.prod(dims)
    try:
        raw = bytes.fromhex(packed)
    except ValueError as exc:
        raise ParseError(f"occupancy is not valid hex: {exc}") from exc
    expected = (count + 7) // 8
    if len(raw) != expected:
        raise ParseError(f"occupancy has {len(raw)} bytes, dims {dims} need {expected}")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=count)
    return bits.astype(bool).reshape(dims)


def write_vox(grid: VoxelGrid) -> str:
    packed = pack_occupancy(grid.occupancy)
    lines = [
        VOX_MAGIC,
        "dims " + " ".join(str(n) for n in grid.dims),
        "origin " + " ".join(repr(float(c)) for c in grid.origin),
        f"cell_size {float(grid.cell_size)!r}",
        "occupancy",
    ]
    lines.extend(packed[i:i + HEX_LINE_WIDTH] for i in range(0, len(packed), HEX_LINE_WIDTH))
    return "\n".join(lines) + "\n"


def _field(lines: list[str], index: int, key: str, count: int) -> list[str]:
    number = index + 1
    if index >= len(lines):
        raise ParseError(f"missing '{key}' line", line=number)
    parts = lines[index].split()
    if not parts or parts[0] != key:
        raise ParseError(f"expected '{key}'", line=number)
    if len(parts) != count + 1:
        raise ParseError(f"'{key}' needs {count} values, got {len(parts) - 1}", line=number)
    return parts[1:]


def parse_vox(text: str | bytes) -> VoxelGrid:
    """
    Parse a grid written by :func:`write_vox`.

    Raises:
        ParseError: With the line number of the offending header line
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("voxel file is not ASCII", offset=exc.start) from exc
    lines = text.splitlines()
    if not lines or lines[0].strip() != VOX_MAGIC:
        raise ParseError(f"missing '{VOX_MAGIC}' header", line=1)

    try:
        dims = tuple(int(v) for v in _field(lines, 1, "dims", 3))
    except ValueError:
        raise ParseError("dims must be integers", line=2) from None
    try:
        origin = tuple(float(v) for v in _field(lines, 2, "origin", 3))
    except ValueError:
        raise ParseError("origin must be decimals", line=3) from None
    try:
        (cell_size,) = (float(v) for v in _field(lines, 3, "cell_size", 1))
    except ValueError:
        raise ParseError("cell_size must be a decimal", line=4) from None
    _field(lines, 4, "occupancy", 0)

    if not all(math.isfinite(c) for c in origin):
        raise ParseError("origin must be finite", line=3)
    if any(n < 1 for n in dims):
        raise ParseError(f"dims must be at least 1, got {dims}", line=2)
    occupancy = unpack_occupancy("".join(line.strip() for line in lines[5:]), dims)
    try:
        return VoxelGrid(origin=origin, cell_size=cell_size, dims=dims, occupancy=occupancy)
    except InvalidArgumentError as exc:
        raise ParseError(str(exc), line=4) from exc
