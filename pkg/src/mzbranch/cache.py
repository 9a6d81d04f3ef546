"""Content-addressed on-disk cache of kernel bases.

Entries are JSON files named by the sha256 of their defining fields. Every
load is revalidated: the payload digest must match and the defining
operators must still annihilate the stored basis. Anything else is treated
as corruption, recomputed and overwritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from .kernels import Subspace, howe_harmonics, simplicial_harmonics, z_harmonics
from .realizations import build_catalog, simplicial_operators

log = logging.getLogger(__name__)

CACHE_SCHEMA = "cache-v1"
ENGINE_VERSION = "0.1.0"
CACHE_ENV = "MZBRANCH_CACHE_DIR"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def entry_key(kind: str, m: int, operator_set: str, degree) -> str:
    fields = {"schema": CACHE_SCHEMA, "kind": kind, "m": m, "ops": operator_set,
              "degree": list(degree)}
    return hashlib.sha256(canonical_json(fields).encode()).hexdigest()


def default_cache_dir() -> Optional[Path]:
    value = os.environ.get(CACHE_ENV)
    return Path(value) if value else None


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    recomputed: int = 0
    write_failures: int = 0


@dataclass
class SubspaceCache:
    """Cache rooted at ``directory``; ``None`` means compute-only."""

    directory: Optional[Path] = None
    stats: CacheStats = field(default_factory=CacheStats)

    def __post_init__(self):
        if self.directory is not None:
            self.directory = Path(self.directory)
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                log.warning("cache directory %s unusable (%s); computing without cache",
                            self.directory, exc)
                self.directory = None

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def path_for(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def _load(self, key: str, operators) -> Optional[Subspace]:
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            payload = entry["payload"]
            if hashlib.sha256(canonical_json(payload).encode()).hexdigest() != entry["digest"]:
                raise ValueError("payload digest mismatch")
            space = Subspace.from_json(payload)
            for op in operators:
                if any(not op.apply(b).is_zero() for b in space.basis):
                    raise ValueError("stored basis is not annihilated")
            if not space.check_independent():
                raise ValueError("stored basis is dependent")
            return space
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("cache entry %s rejected (%s); recomputing", path.name, exc)
            self.stats.recomputed += 1
            return None

    def _store(self, key: str, fields: dict, space: Subspace) -> None:
        payload = space.to_json()
        entry = {
            "key": key,
            "fields": fields,
            "payload": payload,
            "digest": hashlib.sha256(canonical_json(payload).encode()).hexdigest(),
            "metadata": {"created": datetime.now(timezone.utc).isoformat(),
                         "engine_version": ENGINE_VERSION},
        }
        tmp = None
        try:
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self.path_for(key))
        except OSError as exc:
            self.stats.write_failures += 1
            log.warning("could not write cache entry %s (%s)", key, exc)
            if tmp is not None and os.path.exists(tmp):
                os.unlink(tmp)

    def get_or_compute(self, kind: str, m: int, operator_set: str, degree,
                       operators: Sequence, producer: Callable[[], Subspace]) -> Subspace:
        if not self.enabled:
            self.stats.misses += 1
            return producer()
        key = entry_key(kind, m, operator_set, degree)
        hit = self._load(key, operators)
        if hit is not None:
            self.stats.hits += 1
            return hit
        self.stats.misses += 1
        space = producer()
        fields = {"kind": kind, "m": m, "ops": operator_set, "degree": list(degree)}
        self._store(key, fields, space)
        return space


HARMONIC_KINDS = ("howe", "simplicial", "z")


def harmonic_space(cache: Optional[SubspaceCache], kind: str, m: int, degree) -> Subspace:
    """Howe, simplicial or z-only harmonics on a tri-degree, through the cache."""
    cat = build_catalog(m)
    if kind == "howe":
        ops = list(cat.g_minus.values())
        producer = lambda: howe_harmonics(m, degree)
    elif kind == "simplicial":
        ops = simplicial_operators(m)
        producer = lambda: simplicial_harmonics(m, degree)
    elif kind == "z":
        ops = [cat.g_minus["lap(z)"]]
        producer = lambda: z_harmonics(m, degree[0])
        degree = (degree[0], 0, 0)
    else:
        raise ValueError(f"unknown harmonic kind {kind!r}")
    if cache is None:
        return producer()
    return cache.get_or_compute("harmonics", m, kind, tuple(degree), ops, producer)
