"""Unit tests for STL reading and writing."""

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from src.exceptions import MeshForgeError, ParseError
from src.formats import parse_stl, read_mesh, write_mesh, write_stl
from src.formats.stl import BINARY_HEADER, PREAMBLE_SIZE, RECORD_SIZE, face_normals
from src.models.geometry import Mesh
from src.utils.mesh_ops import edge_stats, signed_volume
from src.utils.primitives import make_cuboid, make_cylinder


SINGLE_FACET = """\
solid tri
  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 0 1 0
    endloop
  endfacet
endsolid tri
"""


class TestBinary:
    """Tests for the binary layout."""

    def test_cube_size(self):
        """Test a binary cube is 84 bytes plus 50 per facet."""
        data = write_stl(make_cuboid())
        assert len(data) == 684
        assert data[:80] == BINARY_HEADER
        assert int.from_bytes(data[80:84], "little") == 12

    def test_attribute_bytes_zero(self):
        """Test every facet attribute word is zero."""
        data = write_stl(make_cuboid())
        for i in range(12):
            end = PREAMBLE_SIZE + (i + 1) * RECORD_SIZE
            assert data[end - 2:end] == b"\0\0"

    def test_parse_is_soup(self):
        """Test parsing gives three fresh vertices per facet."""
        mesh = parse_stl(write_stl(make_cuboid()))
        assert (mesh.vertex_count, mesh.face_count) == (36, 12)

    def test_solid_header_still_binary(self):
        """A binary file whose header starts with "solid" is sized, not sniffed."""
        data = write_stl(make_cuboid())
        data = b"solid trick".ljust(80, b" ") + data[80:]
        assert parse_stl(data).face_count == 12

    def test_truncated_payload(self):
        """Test a short facet block is rejected."""
        data = write_stl(make_cuboid())[:-10]
        with pytest.raises(ParseError, match="truncated payload") as excinfo:
            parse_stl(data)
        assert excinfo.value.offset == PREAMBLE_SIZE + 11 * RECORD_SIZE
        assert str(excinfo.value).startswith("byte 634:")

    def test_truncated_header(self):
        """Test input shorter than the header is rejected."""
        with pytest.raises(ParseError) as excinfo:
            parse_stl(b"\0" * 10)
        assert excinfo.value.offset == 10

    def test_empty_mesh(self):
        """Test an empty mesh writes a header with zero facets."""
        data = write_stl(Mesh.empty())
        assert len(data) == PREAMBLE_SIZE
        assert parse_stl(data).is_empty


class TestAscii:
    """Tests for ASCII STL."""

    def test_single_facet(self):
        """Test one ASCII facet parses to one triangle."""
        mesh = parse_stl(SINGLE_FACET.encode("ascii"))
        assert mesh.vertices.tolist() == [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
        assert mesh.faces.tolist() == [[0, 1, 2]]

    def test_writer_layout(self):
        """Test the ASCII writer's solid and facet blocks."""
        text = write_stl(make_cuboid(), "ascii").decode("ascii")
        lines = text.splitlines()
        assert lines[0] == "solid meshforge"
        assert lines[-1] == "endsolid meshforge"
        assert text.count("facet normal") == 12
        assert lines[1] == "  facet normal -1 0 0"

    def test_reparse(self):
        """Test ASCII output parses back to the same triangles."""
        cylinder = make_cylinder(12)
        again = parse_stl(write_stl(cylinder, "ascii"))
        np.testing.assert_allclose(again.vertices, cylinder.triangles.reshape(-1, 3), atol=1e-9)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("solid x\n  vertex 0 0 0\nendsolid x\n", 2),
            ("solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 0 0\nvertex 1 0 0\nendloop\nendfacet\nendsolid\n", 7),
            ("solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 0 zero\n", 4),
            ("solid x\nbogus\nendsolid\n", 2),
            ("solid x\nendsolid\nsolid y\n", 3),
        ],
    )
    def test_errors_name_line(self, text, line):
        """Test ASCII syntax errors carry their line."""
        with pytest.raises(ParseError) as excinfo:
            parse_stl(text.encode("ascii"))
        assert excinfo.value.line == line

    def test_missing_endsolid(self):
        """Test a solid without endsolid is rejected."""
        with pytest.raises(ParseError, match="missing endsolid"):
            parse_stl(b"solid x\n")


class TestNormals:
    """Tests for winding-derived normals."""

    def test_cube_normals_axis_aligned(self):
        """Test cube face normals are unit axis vectors."""
        normals = face_normals(make_cuboid())
        assert np.allclose(np.abs(normals).sum(axis=1), 1.0)
        assert normals[0].tolist() == [-1.0, 0.0, 0.0]


class TestStlFiles:
    """Tests for welded reads."""

    @pytest.mark.parametrize("mode", ["binary", "ascii"])
    def test_read_welds(self, tmp_path, mode):
        """Test reading an STL file welds the soup back."""
        path = write_mesh(make_cylinder(16), tmp_path / "cyl.stl", mode)
        mesh = read_mesh(path)
        assert mesh.vertex_count == 34
        assert edge_stats(mesh).watertight
        assert signed_volume(mesh) == pytest.approx(signed_volume(make_cylinder(16)), rel=1e-6)

    @pytest.mark.parametrize("mode", ["binary", "ascii"])
    @pytest.mark.parametrize("name", ["chair", "ring"])
    def test_csg_results_keep_volume(self, request, tmp_path, name, mode):
        """Test boolean results survive an STL round trip closed and with their volume."""
        mesh = request.getfixturevalue(f"{name}_mesh")
        again = read_mesh(write_mesh(mesh, tmp_path / f"{name}.stl", mode))
        assert again.face_count == mesh.face_count
        assert again.vertex_count == mesh.vertex_count
        assert edge_stats(again).watertight
        assert signed_volume(again) == pytest.approx(signed_volume(mesh), rel=1e-5)


class TestArbitraryInput:
    """Tests that the reader fails only with domain errors."""

    @hyp_settings(max_examples=300, deadline=None)
    @given(data=st.binary(max_size=1024))
    def test_bytes(self, data):
        """Test random bytes either parse or raise a MeshForgeError."""
        try:
            parse_stl(data)
        except MeshForgeError:
            pass

    @hyp_settings(max_examples=200, deadline=None)
    @given(count=st.integers(0, 2**32 - 1), body=st.binary(max_size=200))
    def test_binary_preamble_with_any_count(self, count, body):
        """Test a well-formed header with a lying facet count is handled."""
        data = b"\x00" * 80 + count.to_bytes(4, "little") + body
        try:
            parse_stl(data)
        except MeshForgeError:
            pass

    @hyp_settings(max_examples=200, deadline=None)
    @given(
        tokens=st.lists(
            st.one_of(
                st.sampled_from(
                    ["solid", "facet", "normal", "outer", "loop", "vertex", "endloop", "endfacet", "endsolid", "\n"]
                ),
                st.floats(allow_nan=True, allow_infinity=True).map(repr),
            ),
            max_size=60,
        )
    )
    def test_ascii_like_text(self, tokens):
        """Test keyword soup after an ASCII header is handled."""
        try:
            parse_stl(("solid x\n" + " ".join(tokens)).encode("utf-8"))
        except MeshForgeError:
            pass
