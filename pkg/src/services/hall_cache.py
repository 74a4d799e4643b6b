"""
Persistent cache of Hall polynomials F^X_{M,N}.

Keys are the printed multisegments (M, N, X); the printed form does not
depend on the quiver rank and neither does the Hall polynomial, so one
cache file serves every n. Two backing stores are supported: an
append-only text file of `M|N|X|c0,c1,...` lines, and a SQLite database
selected by a `.db` / `.sqlite` suffix.
"""

import logging
import threading
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from sqlalchemy.exc import IntegrityError

from src.models import HallPolynomialRecord
from src.models.database import create_cache_engine, get_session, init_database, is_sql_path
from src.services.exceptions import CacheConflict, ParseError
from src.services.laurent import QPolynomial
from src.utils.parsing import parse_coefficients, parse_multisegment

LOGGER = logging.getLogger(__name__)

CacheKey = Tuple[str, str, str]
CacheRecord = Tuple[CacheKey, QPolynomial]


def encode_payload(poly: QPolynomial) -> str:
    return ",".join(str(c) for c in poly.as_list())


def encode_record(key: CacheKey, poly: QPolynomial) -> str:
    return "|".join(key) + "|" + encode_payload(poly)


def canonical_key(fields: Iterable[str]) -> CacheKey:
    """
    Reparse and reprint each multisegment, so "[1..2] + [2..2]" and
    "[2..2]+[1..2]" land on the same key. The zero class stays "0".
    """
    key = []
    for text in fields:
        text = text.strip()
        key.append("0" if text == "0" else str(parse_multisegment(text)))
    return tuple(key)


def decode_record(line: str, line_number: int = 0) -> CacheRecord:
    """
    Parse one `M|N|X|c0,c1,...` line.

    Raises:
        ParseError: If the line does not have four fields or a field is malformed
    """
    fields = line.rstrip("\n").split("|")
    if len(fields) != 4:
        raise ParseError(f"Cache line {line_number} must have 4 '|'-separated fields", line, 0)
    return canonical_key(fields[:3]), QPolynomial(parse_coefficients(fields[3]))


class TextHallStore:
    """Append-only line store."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def load(self) -> List[CacheRecord]:
        if not self.path.exists():
            return []
        records = []
        with open(self.path, 'r', encoding='utf-8') as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                records.append(decode_record(line, line_number))
        return records

    def append(self, records: Iterable[CacheRecord]):
        records = list(records)
        if not records:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'a', encoding='utf-8') as f:
            for key, poly in records:
                f.write(encode_record(key, poly) + "\n")


class SqlHallStore:
    """Insert-only SQLite store through SQLAlchemy."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.engine = create_cache_engine(self.path)
        init_database(self.engine)

    def load(self) -> List[CacheRecord]:
        session = get_session(self.engine)
        try:
            rows = session.query(HallPolynomialRecord).order_by(HallPolynomialRecord.id).all()
            return [
                (canonical_key((row.lhs, row.rhs, row.total)), QPolynomial(parse_coefficients(row.coefficients)))
                for row in rows
            ]
        finally:
            session.close()

    def append(self, records: Iterable[CacheRecord]):
        session = get_session(self.engine)
        try:
            for (lhs, rhs, total), poly in records:
                session.add(HallPolynomialRecord(
                    lhs=lhs, rhs=rhs, total=total, coefficients=encode_payload(poly)
                ))
            session.commit()
        except IntegrityError as e:
            session.rollback()
            raise CacheConflict(f"Cache database {self.path} already holds one of the keys: {e}")
        finally:
            session.close()


HallStore = Union[TextHallStore, SqlHallStore]


def open_store(path: Union[str, Path]) -> HallStore:
    """Pick the backing store from the file suffix."""
    if is_sql_path(path):
        return SqlHallStore(Path(path))
    return TextHallStore(Path(path))


class HallCache:
    """
    In-memory Hall polynomial table with an optional backing store.

    Lookups and insertions are serialized by a lock. Insertion is
    idempotent: inserting an equal payload again is a no-op, an unequal
    payload raises CacheConflict.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path else None
        self.store: Optional[HallStore] = open_store(self.path) if self.path else None
        self._entries: Dict[CacheKey, QPolynomial] = {}
        self._pending: List[CacheRecord] = []
        self._lock = threading.Lock()
        if self.store is not None:
            self._load()

    def _load(self):
        records = self.store.load()
        for key, poly in records:
            self._insert(key, poly, pending=False)
        LOGGER.info(f"Loaded {len(self._entries)} Hall polynomials from {self.path}")

    def _insert(self, key: CacheKey, poly: QPolynomial, pending: bool):
        existing = self._entries.get(key)
        if existing is not None:
            if existing != poly:
                raise CacheConflict(
                    f"Conflicting Hall polynomials for {'|'.join(key)}: {existing.as_list()} vs {poly.as_list()}"
                )
            return
        self._entries[key] = poly
        if pending:
            self._pending.append((key, poly))

    @staticmethod
    def key(lhs, rhs, total) -> CacheKey:
        return (str(lhs), str(rhs), str(total))

    def get(self, lhs, rhs, total) -> Optional[QPolynomial]:
        with self._lock:
            return self._entries.get(self.key(lhs, rhs, total))

    def put(self, lhs, rhs, total, poly: QPolynomial):
        with self._lock:
            self._insert(self.key(lhs, rhs, total), poly, pending=True)

    def put_many(self, records: Iterable[Tuple[object, object, object, QPolynomial]]):
        with self._lock:
            for lhs, rhs, total, poly in records:
                self._insert(self.key(lhs, rhs, total), poly, pending=True)

    def flush(self) -> int:
        """Write pending records to the backing store; returns how many were written."""
        with self._lock:
            pending, self._pending = self._pending, []
        if self.store is None or not pending:
            return 0
        self.store.append(sorted(pending, key=lambda record: record[0]))
        LOGGER.info(f"Flushed {len(pending)} Hall polynomials to {self.path}")
        return len(pending)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def __contains__(self, key: CacheKey) -> bool:
        with self._lock:
            return key in self._entries


def validate_cache_file(path: Union[str, Path]) -> int:
    """
    Load a cache file and check its records.

    Returns:
        Number of distinct entries

    Raises:
        ParseError: On a malformed line
        CacheConflict: On duplicate keys with different payloads
    """
    return len(HallCache(path))
