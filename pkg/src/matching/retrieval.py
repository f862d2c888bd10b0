"""Model database and best-match retrieval by voxel IoU."""

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from sqlalchemy.exc import SQLAlchemyError

from src.config import settings
from src.database import (
    VoxelCacheRepository,
    create_cache_engine,
    create_session_factory,
    init_cache,
    session_scope,
)
from src.exceptions import (
    EmptyDatabaseError,
    InvalidArgumentError,
    ManifestError,
    MeshForgeError,
)
from src.formats import read_mesh
from src.matching.voxelize import voxelize, iou
from src.models.geometry import Mesh
from src.models.voxels import MatchResult, VoxelGrid


logger = logging.getLogger(__name__)


class ManifestEntry(BaseModel):
    """One model listed in a database manifest."""

    model_config = ConfigDict(frozen=True, protected_namespaces=())

    model_id: str = Field(..., min_length=1)
    file: str = Field(..., min_length=1)
    display_name: str | None = None


class Manifest(BaseModel):
    """Database manifest: grid resolution and model list."""

    model_config = ConfigDict(frozen=True)

    resolution: int = Field(default_factory=lambda: settings.VOXEL_RESOLUTION, ge=4)
    models: list[ManifestEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_unique_ids(self) -> "Manifest":
        seen: set[str] = set()
        for entry in self.models:
            if entry.model_id in seen:
                raise ManifestError(f"duplicate model_id '{entry.model_id}'")
            seen.add(entry.model_id)
        return self

    @classmethod
    def parse(cls, text: str) -> "Manifest":
        """Parse manifest JSON; a bare list is read as the model list."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"line {exc.lineno}: {exc.msg}") from exc
        if isinstance(data, list):
            data = {"models": data}
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise ManifestError(f"invalid manifest: {exc}") from exc


def cache_path(manifest_path: str | Path) -> Path:
    """Location of the voxel cache that belongs to a manifest."""
    return Path(manifest_path).parent / settings.VOXEL_CACHE_FILENAME


class DatabaseEntry(BaseModel):
    """A database model with its canonical grid."""

    model_config = ConfigDict(frozen=True, protected_namespaces=())

    model_id: str
    display_name: str | None = None
    path: Path | None = None
    content_hash: str | None = None
    grid: VoxelGrid


class ModelDatabase:
    """
    Candidate models for retrieval, each voxelized in the canonical frame.

    Grids of models loaded from a manifest are cached in a SQLite file next
    to the manifest and recomputed when the mesh file's sha256 changes. An
    unreadable cache is ignored with a warning.
    """

    def __init__(self, entries: list[DatabaseEntry], resolution: int, manifest_path: Path | None = None):
        ids = [entry.model_id for entry in entries]
        if len(set(ids)) != len(ids):
            raise ManifestError("model ids must be unique")
        self.entries = list(entries)
        self.resolution = resolution
        self.manifest_path = manifest_path
        self._by_id = {entry.model_id: entry for entry in self.entries}

    @classmethod
    def load(
        cls,
        manifest_path: str | Path,
        resolution: int | None = None,
        use_cache: bool | None = None,
    ) -> "ModelDatabase":
        """
        Load every model listed in a manifest.

        Args:
            manifest_path: JSON manifest; relative files resolve against its directory
            resolution: Overrides the manifest's resolution
            use_cache: Defaults to settings.VOXEL_CACHE_ENABLED

        Returns:
            ModelDatabase in manifest order

        Raises:
            ManifestError: For bad JSON or schema, duplicate ids, or unreadable meshes
        """
        manifest_path = Path(manifest_path)
        try:
            manifest = Manifest.parse(manifest_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ManifestError(f"cannot read manifest {manifest_path}: {exc}") from exc
        resolution = manifest.resolution if resolution is None else resolution
        use_cache = settings.VOXEL_CACHE_ENABLED if use_cache is None else use_cache
        base_dir = manifest_path.parent

        if not use_cache:
            entries = [cls._load_entry(item, base_dir, resolution, None) for item in manifest.models]
            return cls(entries, resolution, manifest_path)

        cache = cache_path(manifest_path)
        engine = create_cache_engine(cache)
        try:
            init_cache(engine)
            with session_scope(create_session_factory(engine)) as session:
                repository = VoxelCacheRepository(session)
                entries = [
                    cls._load_entry(item, base_dir, resolution, repository)
                    for item in manifest.models
                ]
        except SQLAlchemyError as exc:
            logger.warning("voxel cache %s unusable, loading without it: %s", cache, exc)
            entries = [cls._load_entry(item, base_dir, resolution, None) for item in manifest.models]
        finally:
            engine.dispose()
        return cls(entries, resolution, manifest_path)

    @staticmethod
    def _load_entry(
        item: ManifestEntry,
        base_dir: Path,
        resolution: int,
        repository: VoxelCacheRepository | None,
    ) -> DatabaseEntry:
        path = base_dir / item.file
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise ManifestError(f"model '{item.model_id}': cannot read {item.file}") from exc
        content_hash = hashlib.sha256(data).hexdigest()

        grid = None
        if repository is not None:
            grid = repository.get_fresh(item.model_id, content_hash, resolution)
        if grid is None:
            try:
                grid = voxelize(read_mesh(path), resolution)
            except MeshForgeError as exc:
                raise ManifestError(f"model '{item.model_id}': {exc}") from exc
            if repository is not None:
                repository.upsert(item.model_id, content_hash, grid)

        return DatabaseEntry(
            model_id=item.model_id,
            display_name=item.display_name,
            path=path,
            content_hash=content_hash,
            grid=grid,
        )

    @classmethod
    def from_meshes(cls, meshes: dict[str, Mesh], resolution: int | None = None) -> "ModelDatabase":
        """In-memory database, no manifest and no cache."""
        resolution = settings.VOXEL_RESOLUTION if resolution is None else resolution
        entries = [
            DatabaseEntry(model_id=model_id, grid=voxelize(mesh, resolution))
            for model_id, mesh in meshes.items()
        ]
        return cls(entries, resolution)

    @property
    def model_ids(self) -> list[str]:
        return [entry.model_id for entry in self.entries]

    def get(self, model_id: str) -> DatabaseEntry:
        try:
            return self._by_id[model_id]
        except KeyError:
            raise InvalidArgumentError(f"unknown model_id '{model_id}'") from None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DatabaseEntry]:
        return iter(self.entries)


def best_match(
    query: Mesh,
    db: ModelDatabase,
    k: int | None = None,
    workers: int | None = None,
) -> list[MatchResult]:
    """
    Rank database models by canonical-frame IoU with ``query``.

    Args:
        query: Watertight mesh
        db: Non-empty model database
        k: Number of results (defaults to settings.MATCH_TOP_K)
        workers: Scoring threads (defaults to settings.MATCH_WORKERS)

    Returns:
        min(k, len(db)) results, score descending, ties by ascending model_id

    Raises:
        InvalidArgumentError: If k < 1
        EmptyDatabaseError: If the database has no entries
    """
    k = settings.MATCH_TOP_K if k is None else k
    workers = settings.MATCH_WORKERS if workers is None else workers
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}")
    if len(db) == 0:
        raise EmptyDatabaseError("model database has no entries")

    grid = voxelize(query, db.resolution)

    def score(entry: DatabaseEntry) -> MatchResult:
        return MatchResult(
            model_id=entry.model_id,
            score=iou(grid, entry.grid),
            display_name=entry.display_name,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(score, db.entries))
    else:
        results = [score(entry) for entry in db.entries]

    results.sort(key=lambda result: (-result.score, result.model_id))
    logger.debug("best match over %d models: %s", len(db), results[0].model_id)
    return results[:k]


def format_matches(results: list[MatchResult]) -> str:
    """TSV ranking: ``rank\\tmodel_id\\tscore`` header, 6-decimal scores."""
    return MatchResult.format_table(results)
