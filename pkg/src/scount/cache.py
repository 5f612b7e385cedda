"""Memo store for realization counts and classes, optionally backed by JSON lines.

Counts are keyed by the unpinned canonical key of a graph.  Classes are
keyed by the pinned key of a marked calligraph and stored for the
orientation in which the base endpoint with the smaller canonical label
comes first; a lookup whose key has ``swap`` set gets ``(a, c, b)``.
"""
from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .graph import CanonicalKey

log = logging.getLogger(__name__)

CACHE_ENV = "SCOUNT_CACHE"
COUNT, CLASS = "count", "class"


@dataclass
class CacheEntry:
    kind: str
    value: int | tuple[int, int, int]
    provenance: dict = field(default_factory=dict)


def _swap(v):
    a, b, c = v
    return (a, c, b)


class CacheStore:
    """Thread-safe memo; every ``put`` is appended to ``path`` when one is set."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[str, bytes], CacheEntry] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.skipped_lines = 0
        if self.path is not None and self.path.exists():
            self._load()

    @classmethod
    def from_env(cls, path=None) -> "CacheStore":
        """Explicit path first, then ``$SCOUNT_CACHE``, else in-memory only."""
        return cls(path if path is not None else os.environ.get(CACHE_ENV) or None)

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    kind = rec["kind"]
                    key = bytes.fromhex(rec["key"])
                    if kind == COUNT:
                        value = int(rec["value"])
                    elif kind == CLASS:
                        a, b, c = (int(x) for x in rec["value"])
                        value = (a, b, c)
                    else:
                        raise ValueError(f"unknown kind {kind!r}")
                except (ValueError, KeyError, TypeError) as exc:
                    self.skipped_lines += 1
                    log.warning("%s:%d: ignoring corrupt cache record (%s)", self.path, lineno, exc)
                    continue
                self._data[(kind, key)] = CacheEntry(kind, value, rec.get("provenance") or {})

    def _append(self, kind: str, key: bytes, entry: CacheEntry):
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        rec = {"key": key.hex(), "kind": kind, "value": entry.value if kind == COUNT else list(entry.value),
               "provenance": entry.provenance}
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def get(self, kind: str, key: CanonicalKey) -> CacheEntry | None:
        with self._lock:
            entry = self._data.get((kind, key.key))
            if entry is None:
                self.misses += 1
                return None
            self.hits += 1
        if kind == CLASS and key.swap:
            return CacheEntry(kind, _swap(entry.value), entry.provenance)
        return entry

    def put(self, kind: str, key: CanonicalKey, value, provenance: dict | None = None) -> None:
        if kind == CLASS:
            value = tuple(int(x) for x in value)
            if key.swap:
                value = _swap(value)
        elif kind == COUNT:
            value = int(value)
        else:
            raise ValueError(f"unknown cache kind {kind!r}")
        entry = CacheEntry(kind, value, dict(provenance or {}))
        with self._lock:
            old = self._data.get((kind, key.key))
            if old is not None:
                if old.value != value:
                    log.warning("cache conflict for %s entry: kept %s, got %s", kind, old.value, value)
                return
            self._data[(kind, key.key)] = entry
            self._append(kind, key.key, entry)

    # convenience wrappers
    def get_count(self, key: CanonicalKey) -> int | None:
        e = self.get(COUNT, key)
        return None if e is None else e.value

    def get_class(self, key: CanonicalKey) -> tuple[int, int, int] | None:
        e = self.get(CLASS, key)
        return None if e is None else e.value

    def __len__(self) -> int:
        return len(self._data)

    def stats(self) -> dict:
        kinds = [k for k, _ in self._data]
        return {
            "path": str(self.path) if self.path else None,
            "entries": len(self._data),
            "counts": kinds.count(COUNT),
            "classes": kinds.count(CLASS),
            "hits": self.hits,
            "misses": self.misses,
            "skipped_lines": self.skipped_lines,
        }

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            if self.path is not None and self.path.exists():
                self.path.unlink()
