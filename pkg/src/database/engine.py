"""Cache engine and session management."""

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import Session, sessionmaker

from src.config import settings
from .models import Base


def create_cache_engine(path: str | Path | None = None) -> Engine:
    """
    Create a SQLite engine for the voxel cache.

    Args:
        path: Database file; None gives an in-memory database

    Returns:
        Engine with SQL echo following settings.DEBUG
    """
    url = "sqlite://" if path is None else f"sqlite:///{Path(path)}"
    return create_engine(url, echo=settings.DEBUG)


def create_session_factory(engine: Engine) -> sessionmaker[Session]:
    return sessionmaker(bind=engine, autocommit=False, autoflush=False, expire_on_commit=False)


def init_cache(engine: Engine) -> None:
    """Create cache tables."""
    Base.metadata.create_all(bind=engine)


def drop_cache(engine: Engine) -> None:
    """Drop cache tables."""
    Base.metadata.drop_all(bind=engine)


@contextmanager
def session_scope(factory: sessionmaker[Session]) -> Iterator[Session]:
    """Session that commits on success and rolls back on error."""
    session = factory()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
