"""Content-addressed on-disk cache of primary expansions.

Entries are JSON documents named by the SHA-256 of their canonical key and
carry a checksum of their payload. A missing, unreadable or mismatching
entry is recomputed, never trusted. Writes go through a temporary file and
an atomic rename, so concurrent readers never see a partial entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

from . import __version__

DEFAULT_DIR = ".whmf-cache"
KINDS = ("delta", "eisenstein", "j", "f")


def cache_dir() -> Path:
    return Path(os.environ.get("WHMF_CACHE_DIR", DEFAULT_DIR))


def _canonical(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


@dataclass(frozen=True)
class CacheKey:
    kind: str
    level: int
    weight: int | None
    character: str | None
    m: int | None
    precision: int
    version: str = __version__

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"cache kind must be one of {KINDS}")

    def digest(self) -> str:
        return hashlib.sha256(_canonical(asdict(self))).hexdigest()


class Cache:
    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else cache_dir()
        self.hits = 0
        self.misses = 0
        self.rejected = 0

    def path(self, key: CacheKey) -> Path:
        d = key.digest()
        return self.root / d[:2] / f"{d}.json"

    def load(self, key: CacheKey) -> dict | None:
        p = self.path(key)
        try:
            doc = json.loads(p.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            self.rejected += 1
            return None
        if not _entry_ok(doc, key):
            self.rejected += 1
            return None
        return doc["payload"]

    def store(self, key: CacheKey, payload: dict) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        doc = {"key": asdict(key), "payload": payload,
               "checksum": hashlib.sha256(_canonical(payload)).hexdigest()}
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(json.dumps(doc, sort_keys=True))
            os.replace(tmp, p)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def fetch(self, key: CacheKey, compute: Callable[[], dict]) -> dict:
        payload = self.load(key)
        if payload is not None:
            self.hits += 1
            return payload
        self.misses += 1
        payload = compute()
        self.store(key, payload)
        return payload

    def entries(self) -> list[Path]:
        if not self.root.exists():
            return []
        return sorted(self.root.glob("??/*.json"))

    def verify(self) -> tuple[int, list[str]]:
        """Number of entries and the names of the corrupt ones."""
        bad = []
        files = self.entries()
        for p in files:
            try:
                doc = json.loads(p.read_text())
                key = CacheKey(**doc["key"])
                ok = _entry_ok(doc, key) and p.stem == key.digest()
            except (OSError, ValueError, TypeError, KeyError):
                ok = False
            if not ok:
                bad.append(p.name)
        return len(files), bad

    def clear(self) -> int:
        files = self.entries()
        for p in files:
            p.unlink(missing_ok=True)
        return len(files)


def _entry_ok(doc, key: CacheKey) -> bool:
    if not isinstance(doc, dict) or doc.get("key") != asdict(key) or "payload" not in doc:
        return False
    return doc.get("checksum") == hashlib.sha256(_canonical(doc["payload"])).hexdigest()
