"""Unit tests for database repositories."""

from datetime import datetime, timezone

import numpy as np
import pytest

from src.database import (
    VoxelCacheRepository,
    create_cache_engine,
    create_session_factory,
    drop_cache,
    init_cache,
    session_scope,
)
from src.database.models import VoxelCacheEntry
from src.models.voxels import VoxelGrid


def cube_grid(resolution: int, fill: bool = True) -> VoxelGrid:
    return VoxelGrid(
        origin=(-0.5, -0.5, -0.5),
        cell_size=1.0 / resolution,
        dims=(resolution,) * 3,
        occupancy=np.full((resolution,) * 3, fill),
    )


@pytest.fixture
def session():
    """Create an in-memory database session for testing."""
    engine = create_cache_engine()
    init_cache(engine)
    factory = create_session_factory(engine)

    with factory() as session:
        yield session
        session.rollback()

    drop_cache(engine)
    engine.dispose()


class TestVoxelCacheRepository:
    """Tests for VoxelCacheRepository."""

    def test_upsert_and_get(self, session):
        """Test inserting a grid and reading it back."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(8))

        entry = repo.get("cube", 8)
        assert entry is not None
        assert entry.content_hash == "hash-1"
        assert entry.to_grid() == cube_grid(8)

    def test_get_missing(self, session):
        """Test a miss returns None."""
        repo = VoxelCacheRepository(session)
        assert repo.get("cube", 8) is None
        assert repo.get_fresh("cube", "hash-1", 8) is None

    def test_get_fresh_checks_hash(self, session):
        """Test a row computed from other bytes is stale."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(8))

        assert repo.get_fresh("cube", "hash-1", 8) == cube_grid(8)
        assert repo.get_fresh("cube", "hash-2", 8) is None

    def test_upsert_overwrites(self, session):
        """Test a second upsert replaces the row instead of adding one."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(8))
        repo.upsert("cube", "hash-2", cube_grid(8, fill=False))

        assert len(repo.list_all()) == 1
        assert repo.get_fresh("cube", "hash-2", 8).occupied_count == 0

    def test_overwrite_stamps_aware_utc_time(self, session):
        """Test an overwritten row gets a timezone-aware UTC timestamp."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(8))
        before = datetime.now(timezone.utc)
        entry = repo.upsert("cube", "hash-2", cube_grid(8))

        assert entry.created_at.tzinfo is timezone.utc
        assert entry.created_at >= before

    def test_resolutions_kept_apart(self, session):
        """Test rows are keyed by model and resolution."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(16))
        repo.upsert("cube", "hash-1", cube_grid(8))
        repo.upsert("ball", "hash-3", cube_grid(8))

        listed = [(e.model_id, e.resolution) for e in repo.list_all()]
        assert listed == [("ball", 8), ("cube", 8), ("cube", 16)]

    def test_delete(self, session):
        """Test deleting every row of a model."""
        repo = VoxelCacheRepository(session)
        repo.upsert("cube", "hash-1", cube_grid(16))
        repo.upsert("cube", "hash-1", cube_grid(8))
        repo.upsert("ball", "hash-3", cube_grid(8))

        assert repo.delete("cube") == 2
        assert [e.model_id for e in repo.list_all()] == ["ball"]
        assert repo.delete("cube") == 0


class TestSessionScope:
    """Tests for the transactional session helper."""

    def test_commits(self):
        """Test a clean exit commits the session."""
        engine = create_cache_engine()
        init_cache(engine)
        factory = create_session_factory(engine)

        with session_scope(factory) as session:
            VoxelCacheRepository(session).upsert("cube", "hash-1", cube_grid(4))
        with session_scope(factory) as session:
            assert VoxelCacheRepository(session).get("cube", 4) is not None
        engine.dispose()

    def test_rolls_back_on_error(self):
        """Test an exception rolls the session back."""
        engine = create_cache_engine()
        init_cache(engine)
        factory = create_session_factory(engine)

        with pytest.raises(RuntimeError):
            with session_scope(factory) as session:
                VoxelCacheRepository(session).upsert("cube", "hash-1", cube_grid(4))
                raise RuntimeError("boom")
        with session_scope(factory) as session:
            assert session.query(VoxelCacheEntry).count() == 0
        engine.dispose()

    def test_file_backed(self, tmp_path):
        """Test rows survive reopening a file-backed cache."""
        path = tmp_path / "cache.sqlite"
        engine = create_cache_engine(path)
        init_cache(engine)
        with session_scope(create_session_factory(engine)) as session:
            VoxelCacheRepository(session).upsert("cube", "hash-1", cube_grid(4))
        engine.dispose()

        engine = create_cache_engine(path)
        with session_scope(create_session_factory(engine)) as session:
            assert VoxelCacheRepository(session).get_fresh("cube", "hash-1", 4) == cube_grid(4)
        engine.dispose()
