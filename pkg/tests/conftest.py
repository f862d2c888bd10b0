"""Shared fixtures for MeshForge tests."""

import json
from functools import reduce
from pathlib import Path

import pytest

from src.csg import difference, union
from src.formats import write_mesh
from src.models.geometry import Mesh, Transform
from src.utils.mesh_ops import apply_transform, resize
from src.utils.primitives import make_cuboid, make_cylinder, make_ellipsoid


SCENES_DIR = Path(__file__).resolve().parent.parent / "scenes"
SCRIPTS_DIR = Path(__file__).resolve().parent.parent / "scripts"

# Chair cuboids as (position, rotation, scale), in table order.
CHAIR_TRANSFORMS = [
    ((0.0, 0.044, 0.4), (0.0, 0.0, 0.0), (0.1, 0.1, 0.01)),
    ((0.0, 0.0, 0.355), (0.0, 0.0, 0.0), (0.1, 0.012, 0.1)),
    ((-0.03, -0.034, 0.386), (0.0, 0.0, 0.0), (0.015, 0.07, 0.015)),
    ((-0.03, -0.034, 0.326), (0.0, 0.0, 0.0), (0.015, 0.07, 0.015)),
    ((0.03, -0.034, 0.326), (0.0, 0.0, 0.0), (0.015, 0.07, 0.015)),
    ((0.03, -0.034, 0.386), (0.0, 0.0, 0.0), (0.015, 0.07, 0.015)),
    ((-0.045, 0.017, 0.3525), (0.0, 0.0, 0.0), (0.01, 0.035, 0.095)),
    ((0.045, 0.017, 0.3525), (0.0, 0.0, 0.0), (0.01, 0.035, 0.095)),
    ((0.0, 0.0175, 0.3525), (0.0, 0.0, 0.0), (0.12, 0.018, 0.07)),
]

CHAIR_DIMS = (0.120, 0.163, 0.100)


def box(position=(0.0, 0.0, 0.0), scale=(1.0, 1.0, 1.0), rotation=(0.0, 0.0, 0.0)) -> Mesh:
    """Unit cube moved by a TRS transform."""
    return apply_transform(
        make_cuboid(), Transform(position=position, rotation=rotation, scale=scale)
    )


def box_between(lo, hi) -> Mesh:
    """Axis-aligned box with the given corners."""
    center = tuple((a + b) / 2.0 for a, b in zip(lo, hi))
    size = tuple(b - a for a, b in zip(lo, hi))
    return box(position=center, scale=size)


@pytest.fixture(scope="session")
def chair_boxes() -> list[Mesh]:
    return [
        box(position=pos, rotation=rot, scale=scale) for pos, rot, scale in CHAIR_TRANSFORMS
    ]


@pytest.fixture(scope="session")
def chair_mesh(chair_boxes) -> Mesh:
    """Left fold of union over the chair cuboids."""
    return reduce(union, chair_boxes)


@pytest.fixture(scope="session")
def ring_mesh() -> Mesh:
    bore = apply_transform(make_cylinder(), Transform(scale=(0.5, 2.0, 0.5)))
    return difference(make_cylinder(), bore)


@pytest.fixture
def holed_cube() -> Mesh:
    """Unit cube with its last face removed."""
    cube = make_cuboid()
    return Mesh(vertices=cube.vertices, faces=cube.faces[:-1])


@pytest.fixture
def model_database_dir(tmp_path, chair_mesh, ring_mesh) -> Path:
    """Directory with six shape-distinct meshes and a manifest listing them."""
    meshes = {
        "chair": (chair_mesh, "chair.obj"),
        "cube": (make_cuboid(), "cube.obj"),
        "sphere": (make_ellipsoid(), "sphere.stl"),
        "cylinder": (make_cylinder(), "cylinder.obj"),
        "slab": (resize(make_cuboid(), (1.0, 0.1, 0.6)), "slab.obj"),
        "ring": (ring_mesh, "ring.stl"),
    }
    models = []
    for model_id, (mesh, filename) in meshes.items():
        write_mesh(mesh, tmp_path / filename)
        models.append({"model_id": model_id, "file": filename})
    manifest = {"resolution": 32, "models": models}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return tmp_path


@pytest.fixture
def manifest_path(model_database_dir) -> Path:
    return model_database_dir / "manifest.json"
