"""Unit tests for the pydantic value types."""

import numpy as np
import pytest

from src.exceptions import InvalidArgumentError, InvalidMeshError, ShapeMismatchError
from src.models import (
    Aabb,
    Command,
    DisplacementField,
    MatchResult,
    Mesh,
    PrintabilityReport,
    RunReport,
    VoxelGrid,
)
from src.utils.primitives import make_cuboid


class TestMesh:
    """Tests for Mesh invariants."""

    def test_arrays_are_read_only(self):
        """Test vertex arrays cannot be written in place."""
        cube = make_cuboid()
        with pytest.raises(ValueError):
            cube.vertices[0, 0] = 5.0

    def test_caller_array_is_copied(self):
        """Test the mesh keeps its own copy of the input array."""
        vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        mesh = Mesh(vertices=vertices, faces=[[0, 1, 2]])
        vertices[0, 0] = 9.0
        assert mesh.vertices[0, 0] == 0.0

    def test_index_out_of_range(self):
        """Test a face pointing past the vertex list is rejected."""
        with pytest.raises(InvalidMeshError, match="out of range"):
            Mesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 1, 0]], faces=[[0, 1, 3]])

    def test_repeated_index(self):
        """Test a face using one vertex twice is rejected."""
        with pytest.raises(InvalidMeshError, match="same vertex"):
            Mesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 1, 0]], faces=[[0, 1, 1]])

    def test_non_triangle_faces(self):
        """Test quads are rejected."""
        with pytest.raises(InvalidMeshError):
            Mesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], faces=[[0, 1, 2, 3]])

    def test_non_finite_vertices(self):
        """Test NaN coordinates are rejected."""
        with pytest.raises(InvalidMeshError, match="finite"):
            Mesh(vertices=[[np.nan, 0, 0]], faces=[])

    def test_empty(self):
        """Test the empty mesh has no vertices."""
        empty = Mesh.empty()
        assert empty.is_empty
        assert empty.vertices.shape == (0, 3)

    def test_equality_by_content(self):
        """Test meshes compare and hash by their arrays."""
        assert make_cuboid() == make_cuboid()
        assert hash(make_cuboid()) == hash(make_cuboid())


class TestAabb:
    """Tests for bounding boxes."""

    def test_order_enforced(self):
        """Test min above max on any axis is rejected."""
        with pytest.raises(InvalidArgumentError):
            Aabb(min=(0.0, 1.0, 0.0), max=(1.0, 0.0, 1.0))

    def test_measures(self):
        """Test size, center and longest side."""
        aabb = Aabb(min=(-1.0, 0.0, 2.0), max=(1.0, 0.5, 2.25))
        assert aabb.size == (2.0, 0.5, 0.25)
        assert aabb.center == (0.0, 0.25, 2.125)
        assert aabb.longest_side == 2.0

    def test_union(self):
        """Test the union box encloses both boxes."""
        a = Aabb(min=(0.0, 0.0, 0.0), max=(1.0, 1.0, 1.0))
        b = Aabb(min=(0.5, -1.0, 0.5), max=(2.0, 0.5, 0.75))
        assert a.union(b) == Aabb(min=(0.0, -1.0, 0.0), max=(2.0, 1.0, 1.0))


class TestPrintabilityReport:
    """Tests for report invariants."""

    def test_genus_requires_closed_single_component(self):
        """Test genus is refused for an open mesh."""
        with pytest.raises(InvalidArgumentError):
            PrintabilityReport(
                watertight=False, manifold=True, consistent_winding=True, genus=0, component_count=1
            )

    def test_undefined_genus_allowed(self):
        """Test several components may leave genus unset."""
        report = PrintabilityReport(
            watertight=True, manifold=True, consistent_winding=True, genus=None, component_count=2
        )
        assert report.is_printable


class TestVoxelGrid:
    """Tests for voxel grid invariants."""

    def test_occupancy_reshaped(self):
        """Test flat occupancy is reshaped to the grid dims."""
        grid = VoxelGrid(origin=(0, 0, 0), cell_size=0.5, dims=(2, 3, 4), occupancy=np.ones(24))
        assert grid.occupancy.shape == (2, 3, 4)
        assert grid.occupied_count == 24
        assert grid.occupied_volume == pytest.approx(3.0)

    def test_wrong_length(self):
        """Test occupancy of the wrong size is rejected."""
        with pytest.raises(InvalidArgumentError, match="cells"):
            VoxelGrid(origin=(0, 0, 0), cell_size=1.0, dims=(2, 2, 2), occupancy=np.ones(7))

    @pytest.mark.parametrize("cell_size", [0.0, -1.0, float("inf")])
    def test_bad_cell_size(self, cell_size):
        """Test non-positive or infinite cell sizes are rejected."""
        with pytest.raises(InvalidArgumentError):
            VoxelGrid(origin=(0, 0, 0), cell_size=cell_size, dims=(1, 1, 1), occupancy=[True])

    def test_bad_dims(self):
        """Test a zero dimension is rejected."""
        with pytest.raises(InvalidArgumentError):
            VoxelGrid(origin=(0, 0, 0), cell_size=1.0, dims=(0, 1, 1), occupancy=[])


class TestMatchResult:
    """Tests for ranked results."""

    def test_score_range(self):
        """Test scores above one are rejected."""
        with pytest.raises(ValueError):
            MatchResult(model_id="x", score=1.5)

    def test_table(self):
        """Test the tab-separated ranking table."""
        table = MatchResult.format_table(
            [MatchResult(model_id="chair", score=1.0), MatchResult(model_id="slab", score=0.25)]
        )
        assert table == "rank\tmodel_id\tscore\n1\tchair\t1.000000\n2\tslab\t0.250000\n"


class TestDisplacementField:
    """Tests for displacement fields."""

    def test_length_mismatch(self):
        """Test the field must cover every template vertex."""
        with pytest.raises(ShapeMismatchError):
            DisplacementField(displacements=np.zeros((3, 3)), template_vertex_count=4)

    def test_addition(self):
        """Test fields add per vertex."""
        a = DisplacementField.from_array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        b = DisplacementField.from_array([[0.5, 0.0, 0.0], [0.0, 0.0, 2.0]])
        assert (a + b).displacements.tolist() == [[1.5, 0.0, 0.0], [0.0, 1.0, 2.0]]

    def test_addition_mismatch(self):
        """Test adding fields of different lengths fails."""
        with pytest.raises(ShapeMismatchError):
            DisplacementField.zeros(2) + DisplacementField.zeros(3)

    def test_zero(self):
        """Test the zero field has no magnitude."""
        assert DisplacementField.zeros(5).is_zero
        assert DisplacementField.zeros(5).max_magnitude == 0.0


class TestRunReport:
    """Tests for report rendering."""

    def test_empty(self):
        """Test an empty report renders nothing."""
        assert RunReport().render() == ""

    def test_render(self):
        """Test dimensions, matches and exports are rendered in order."""
        report = RunReport(
            dimensions=[("chair", (0.12, 0.163, 0.1))],
            matches=[("chair", [MatchResult(model_id="chair", score=1.0)])],
            exported=[("chair", "/tmp/out/chair.obj")],
        )
        assert report.render() == (
            "chair: 0.120000 0.163000 0.100000\n"
            "# match chair\n"
            "rank\tmodel_id\tscore\n"
            "1\tchair\t1.000000\n"
            "exported: chair -> chair.obj\n"
        )

    def test_command_references(self):
        """Test which names a command defines and reads."""
        command = Command(verb="add", line=3, name="out", operands=("a", "b"))
        assert command.defines == "out"
        assert command.references == ("a", "b")
        assert Command(verb="dimension", line=1, name="a").defines is None
