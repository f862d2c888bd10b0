"""Template mesh deformation by per-vertex displacement."""

import logging
import math
from pathlib import Path

import numpy as np

from src.exceptions import InvalidArgumentError, ParseError, ShapeMismatchError
from src.models.deform import DisplacementField
from src.models.geometry import Mesh
from src.utils.primitives import make_icosphere


logger = logging.getLogger(__name__)


def make_template(subdivisions: int | None = None) -> Mesh:
    """Genus-zero icosphere template (642 vertices at the default subdivision)."""
    return make_icosphere(subdivisions)


def apply_displacement(template: Mesh, field: DisplacementField) -> Mesh:
    """
    Move every template vertex by its displacement.

    The output shares the template's face array, so connectivity is
    unchanged. A zero field returns the template's vertex array as is.

    Args:
        template: Template mesh
        field: One displacement per template vertex

    Returns:
        Deformed mesh

    Raises:
        ShapeMismatchError: If the field length differs from the vertex count
    """
    if field.template_vertex_count != template.vertex_count:
        raise ShapeMismatchError(
            f"field has {field.template_vertex_count} vectors, "
            f"template has {template.vertex_count} vertices"
        )
    if field.is_zero:
        return Mesh(vertices=template.vertices, faces=template.faces)
    logger.debug(
        "displacing %d vertices, max |d| = %.6g", template.vertex_count, field.max_magnitude
    )
    return Mesh(vertices=template.vertices + field.displacements, faces=template.faces)


def parse_displacement(text: str) -> DisplacementField:
    """
    Parse one ``dx dy dz`` triple per line.

    Raises:
        ParseError: With the line number of a malformed line
    """
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 3 values, got {len(parts)}", line=number)
        try:
            row = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"malformed float in '{line.strip()}'", line=number) from None
        if not all(math.isfinite(v) for v in row):
            raise ParseError("displacement must be finite", line=number)
        rows.append(row)
    return DisplacementField.from_array(np.asarray(rows, dtype=np.float64).reshape(-1, 3))


def load_displacement(path: str | Path) -> DisplacementField:
    """Read a displacement file written by :func:`write_displacement` or an external model."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("displacement file is not valid UTF-8", offset=exc.start) from exc
    return parse_displacement(text)


def write_displacement(field: DisplacementField) -> str:
    """Serialize with shortest round-trip decimals, LF line endings."""
    return "".join(
        " ".join(repr(v + 0.0) for v in row) + "\n" for row in field.displacements.tolist()
    )


def random_displacement(count: int, magnitude: float, seed: int | None = None) -> DisplacementField:
    """
    Random field with every vector no longer than ``magnitude``.

    Raises:
        InvalidArgumentError: If count or magnitude is negative
    """
    if count < 0 or magnitude < 0:
        raise InvalidArgumentError("count and magnitude must be non-negative")
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(count, 3))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    directions = directions / np.where(norms > 0, norms, 1.0)
    lengths = rng.uniform(0.0, magnitude, size=(count, 1))
    return DisplacementField.from_array(directions * lengths)
