"""
Database session management and initialization for the SQL cache store.
"""

from pathlib import Path
from typing import Union

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from src.models import Base

SQL_SUFFIXES = (".db", ".sqlite")


def is_sql_path(path: Union[str, Path]) -> bool:
    """A cache path is backed by SQLite when its suffix says so."""
    return Path(path).suffix.lower() in SQL_SUFFIXES


def database_url(path: Union[str, Path]) -> str:
    return f"sqlite:///{Path(path)}"


def create_cache_engine(path: Union[str, Path]) -> Engine:
    """Create an engine for the cache file."""
    return create_engine(database_url(path), echo=False)


def init_database(engine: Engine):
    """Initialize the database by creating all tables."""
    Base.metadata.create_all(bind=engine)


def get_session(engine: Engine) -> Session:
    """Get a new database session."""
    factory = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    return factory()
