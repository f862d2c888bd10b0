"""BSP-tree solid booleans."""

from .bsp import BspNode, Plane, Polygon
from .operations import (
    CSG_OPERATIONS,
    difference,
    intersection,
    mesh_to_polygons,
    polygons_to_mesh,
    repair_t_junctions,
    union,
)

__all__ = [
    "BspNode",
    "Plane",
    "Polygon",
    "CSG_OPERATIONS",
    "difference",
    "intersection",
    "mesh_to_polygons",
    "polygons_to_mesh",
    "repair_t_junctions",
    "union",
]
