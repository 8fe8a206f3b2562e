"""Persistent representation-number cache: append-only JSON lines.

Each record stores the canonical index actually queried, the exact count as a
decimal string, and the engine version; a version bump invalidates old
entries without touching the file.  Corrupt lines are skipped with a warning,
never trusted.
"""

from __future__ import annotations

import json
import logging
import os
import random

try:
    import fcntl
except ImportError:  # non-POSIX
    fcntl = None

log = logging.getLogger(__name__)

ENGINE_VERSION = "1"

ENV_CACHE_PATH = "SCHOTTKY_WORKBENCH_CACHE"


def index_key(genus: int, upper: list) -> str:
    """Canonical serialization of a GramTarget: genus + upper triangle."""
    return json.dumps({"g": genus, "u": [int(x) for x in upper]},
                      separators=(",", ":"), sort_keys=True)


class CountCache:
    """In-memory map over an optional append-only JSONL file.

    One writer at a time (advisory flock on append); readers work on the
    snapshot loaded at construction plus their own writes.
    """

    def __init__(self, path=None, engine_version: str = ENGINE_VERSION):
        self.path = os.fspath(path) if path is not None else None
        self.engine_version = engine_version
        self._mem = {}
        self.hits = 0
        self.misses = 0
        self.puts = 0
        self.loaded_records = 0
        self.corrupt_records = 0
        if self.path is not None and os.path.exists(self.path):
            self._load()

    def _load(self):
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    lid = rec["lattice_id"]
                    key = rec["index_key"]
                    count = int(rec["count"])
                    ver = rec["engine_version"]
                except (ValueError, KeyError, TypeError):
                    self.corrupt_records += 1
                    log.warning("cache %s: skipping corrupt line %d",
                                self.path, lineno)
                    continue
                if ver != self.engine_version:
                    continue
                self._mem[(lid, key)] = count
                self.loaded_records += 1

    def get(self, lattice_id: str, key: str):
        got = self._mem.get((lattice_id, key))
        if got is None:
            self.misses += 1
        else:
            self.hits += 1
        return got

    def put(self, lattice_id: str, key: str, count: int):
        self._mem[(lattice_id, key)] = int(count)
        self.puts += 1
        if self.path is None:
            return
        rec = {
            "lattice_id": lattice_id,
            "index_key": key,
            "count": str(int(count)),
            "engine_version": self.engine_version,
        }
        line = json.dumps(rec, separators=(",", ":"), sort_keys=True) + "\n"
        with open(self.path, "a", encoding="utf-8") as fh:
            if fcntl is not None:
                fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
            try:
                fh.write(line)
                fh.flush()
            finally:
                if fcntl is not None:
                    fcntl.flock(fh.fileno(), fcntl.LOCK_UN)

    def stats(self) -> dict:
        return {
            "entries": len(self._mem),
            "hits": self.hits,
            "misses": self.misses,
            "puts": self.puts,
            "loaded_records": self.loaded_records,
            "corrupt_records": self.corrupt_records,
            "engine_version": self.engine_version,
            "path": self.path,
        }

    def entries(self):
        return dict(self._mem)

    def verify_sample(self, recompute, fraction: float = 0.01, seed: int = 0):
        """Recompute a random sample of stored counts with `recompute(lattice_id,
        key)`; returns the list of mismatches (expected empty)."""
        rng = random.Random(seed)
        items = sorted(self._mem.items())
        k = max(1, int(len(items) * fraction)) if items else 0
        mismatches = []
        for (lid, key), val in rng.sample(items, k):
            fresh = recompute(lid, key)
            if fresh != val:
                mismatches.append({"lattice_id": lid, "index_key": key,
                                   "cached": val, "recomputed": fresh})
        return mismatches


def cache_from_env(path=None) -> CountCache:
    """Build a cache from an explicit path or the environment variable."""
    if path is None:
        path = os.environ.get(ENV_CACHE_PATH)
    return CountCache(path)
