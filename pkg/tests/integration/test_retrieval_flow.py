"""Integration tests for model database loading and best-match retrieval."""

import json
import logging

import pytest

from src.config import settings
from src.exceptions import EmptyDatabaseError, InvalidArgumentError, ManifestError
from src.formats import read_mesh, write_mesh
from src.matching import ModelDatabase, best_match, cache_path, format_matches
from src.matching import retrieval
from src.models.geometry import Transform
from src.utils.mesh_ops import apply_transform, resize
from src.utils.primitives import make_cuboid, make_ellipsoid


MODEL_FILES = {
    "chair": "chair.obj",
    "cube": "cube.obj",
    "sphere": "sphere.stl",
    "cylinder": "cylinder.obj",
    "slab": "slab.obj",
    "ring": "ring.stl",
}


@pytest.fixture
def database(manifest_path) -> ModelDatabase:
    return ModelDatabase.load(manifest_path)


class TestLoad:
    """Tests for manifest loading."""

    def test_manifest_order(self, database):
        """Test models keep manifest order."""
        assert database.model_ids == list(MODEL_FILES)
        assert database.resolution == 32
        assert len(database) == 6

    def test_entries(self, database, model_database_dir):
        """Test an entry carries its path, hash and grid."""
        entry = database.get("sphere")
        assert entry.path == model_database_dir / "sphere.stl"
        assert len(entry.content_hash) == 64
        assert entry.grid.dims == (32, 32, 32)

    def test_resolution_override(self, manifest_path):
        """Test an explicit resolution beats the manifest."""
        assert ModelDatabase.load(manifest_path, resolution=16, use_cache=False).get("cube").grid.dims == (16, 16, 16)

    def test_unknown_model(self, database):
        """Test looking up an unknown id fails."""
        with pytest.raises(InvalidArgumentError):
            database.get("sofa")

    def test_missing_mesh(self, model_database_dir):
        """Test a missing mesh file names its model."""
        manifest = model_database_dir / "broken.json"
        manifest.write_text(json.dumps({"models": [{"model_id": "x", "file": "nowhere.obj"}]}))
        with pytest.raises(ManifestError, match="'x'"):
            ModelDatabase.load(manifest)

    def test_open_mesh_rejected(self, model_database_dir, holed_cube):
        """Test an open mesh in the manifest is refused."""
        write_mesh(holed_cube, model_database_dir / "holed.obj")
        manifest = model_database_dir / "holed.json"
        manifest.write_text(json.dumps([{"model_id": "holed", "file": "holed.obj"}]))
        with pytest.raises(ManifestError, match="holed"):
            ModelDatabase.load(manifest)

    @pytest.mark.parametrize(
        "content,message",
        [
            ("{not json", "line 1"),
            ('{"models": [{"model_id": "a", "file": "a.obj"}, {"model_id": "a", "file": "b.obj"}]}', "duplicate"),
            ('{"resolution": 2, "models": []}', "invalid manifest"),
            ('{"models": [{"file": "a.obj"}]}', "invalid manifest"),
        ],
    )
    def test_bad_manifest(self, tmp_path, content, message):
        """Test malformed manifests are reported."""
        manifest = tmp_path / "manifest.json"
        manifest.write_text(content)
        with pytest.raises(ManifestError, match=message):
            ModelDatabase.load(manifest)

    def test_missing_manifest(self, tmp_path):
        """Test a missing manifest file is reported."""
        with pytest.raises(ManifestError, match="cannot read"):
            ModelDatabase.load(tmp_path / "absent.json")


class TestVoxelCache:
    """Tests for the SQLite grid cache beside the manifest."""

    def test_cache_file_created(self, manifest_path, database):
        """Test loading writes the cache file beside the manifest."""
        assert (manifest_path.parent / settings.VOXEL_CACHE_FILENAME).exists()

    def test_second_load_uses_cache(self, manifest_path, database, monkeypatch):
        """Test a second load reads grids instead of voxelizing."""
        def fail(*args, **kwargs):
            raise AssertionError("voxelize called on a cached model")

        monkeypatch.setattr(retrieval, "voxelize", fail)
        again = ModelDatabase.load(manifest_path)
        for first, second in zip(database, again):
            assert first.grid == second.grid

    def test_changed_mesh_recomputed(self, manifest_path, model_database_dir, database, monkeypatch):
        """Test only the changed mesh is voxelized again."""
        write_mesh(resize(make_cuboid(), (1.0, 0.5, 1.0)), model_database_dir / "cube.obj")
        calls = []
        original = retrieval.voxelize

        def counting(mesh, resolution=None, frame="canonical"):
            calls.append(resolution)
            return original(mesh, resolution, frame)

        monkeypatch.setattr(retrieval, "voxelize", counting)
        again = ModelDatabase.load(manifest_path)
        assert calls == [32]
        assert again.get("cube").grid != database.get("cube").grid
        assert again.get("sphere").grid == database.get("sphere").grid

    def test_cache_disabled(self, manifest_path):
        """Test loading without the cache leaves no file behind."""
        ModelDatabase.load(manifest_path, use_cache=False)
        assert not (manifest_path.parent / settings.VOXEL_CACHE_FILENAME).exists()

    def test_cache_path_beside_manifest(self, manifest_path):
        """Test the cache file name comes from settings."""
        assert cache_path(manifest_path) == manifest_path.parent / settings.VOXEL_CACHE_FILENAME

    def test_corrupt_cache_is_a_miss(self, manifest_path, caplog):
        """Test garbage in the cache file falls back to voxelizing every model."""
        cache_path(manifest_path).write_bytes(b"not a sqlite database" * 64)
        fresh = ModelDatabase.load(manifest_path, use_cache=False)

        with caplog.at_level(logging.WARNING, logger="src.matching.retrieval"):
            loaded = ModelDatabase.load(manifest_path)

        assert loaded.model_ids == fresh.model_ids
        for first, second in zip(loaded, fresh):
            assert first.grid == second.grid
        assert "unusable" in caplog.text


class TestBestMatch:
    """Tests for ranked retrieval."""

    @pytest.mark.parametrize("model_id", list(MODEL_FILES))
    def test_self_retrieval(self, database, model_database_dir, model_id):
        """Test every model retrieves itself with score one."""
        query = read_mesh(model_database_dir / MODEL_FILES[model_id])
        (top,) = best_match(query, database, k=1)
        assert top.model_id == model_id
        assert top.score == 1.0

    def test_similarity_transform_still_matches(self, database, chair_mesh):
        """Test a moved and scaled chair still matches the chair."""
        moved = apply_transform(chair_mesh, Transform(position=(1.0, -2.0, 0.5), scale=(3.0, 3.0, 3.0)))
        (top,) = best_match(moved, database, k=1)
        assert top.model_id == "chair"
        assert top.score > 0.99

    def test_stretched_chair_ranks_chair_first(self, database, chair_mesh):
        """Test a slightly stretched chair still ranks the chair first."""
        results = best_match(resize(chair_mesh, (1.0, 1.04, 0.97)), database, k=6)
        assert results[0].model_id == "chair"
        assert 0.5 < results[0].score < 1.0

    def test_k_larger_than_database(self, database):
        """Test k is capped at the database size and scores descend."""
        results = best_match(make_ellipsoid(), database, k=50)
        assert len(results) == 6
        scores = [result.score for result in results]
        assert scores == sorted(scores, reverse=True)

    def test_ties_broken_by_model_id(self):
        """Test equal scores are ordered by model id."""
        db = ModelDatabase.from_meshes({"b": make_cuboid(), "a": make_cuboid(), "c": make_ellipsoid()}, 16)
        assert [r.model_id for r in best_match(make_cuboid(), db)] == ["a", "b", "c"]

    def test_threaded_scoring_matches_serial(self, database, ring_mesh):
        """Test worker threads do not change the ranking."""
        assert best_match(ring_mesh, database, workers=4) == best_match(ring_mesh, database, workers=1)

    def test_default_k(self, database):
        """Test k defaults to settings."""
        assert len(best_match(make_cuboid(), database)) == settings.MATCH_TOP_K

    def test_invalid_k(self, database):
        """Test k below one is rejected."""
        with pytest.raises(InvalidArgumentError):
            best_match(make_cuboid(), database, k=0)

    def test_empty_database(self):
        """Test matching against an empty database fails."""
        with pytest.raises(EmptyDatabaseError):
            best_match(make_cuboid(), ModelDatabase([], 32))

    def test_table(self, database):
        """Test the formatted ranking table."""
        text = format_matches(best_match(make_cuboid(), database, k=2))
        lines = text.splitlines()
        assert lines[0] == "rank\tmodel_id\tscore"
        assert lines[1] == "1\tcube\t1.000000"
        assert len(lines) == 3
