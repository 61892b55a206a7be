"""On-disk result cache keyed by a content hash of the canonical run config."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field, asdict
from pathlib import Path

ENV_VAR = "THUEMAHLER_CACHE_DIR"

log = logging.getLogger(__name__)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(key: dict) -> str:
    return hashlib.sha256(canonical_json(key).encode()).hexdigest()


@dataclass
class RunRecord:
    config_hash: str
    version: str
    config: dict
    payload: object
    flags: dict = field(default_factory=dict)
    created: str = ""

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, d):
        return cls(**d)


def cache_dir(explicit=None) -> Path | None:
    d = explicit or os.environ.get(ENV_VAR)
    return Path(d) if d else None


def _path(root: Path, h: str, kind: str) -> Path:
    return root / kind / h[:2] / f"{h}.json"


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _read(path: Path):
    if not path.exists():
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as e:
        log.warning("ignoring corrupt cache entry %s: %s", path, e)
        return None


def cache_lookup(root: Path | None, key: dict, version: str) -> RunRecord | None:
    """Stored record for this config and tool version, or None."""
    if root is None:
        return None
    h = config_hash(key)
    d = _read(_path(root, h, "runs"))
    if d is None:
        return None
    try:
        rec = RunRecord.from_json(d)
    except TypeError as e:
        log.warning("ignoring malformed cache record %s: %s", h, e)
        return None
    if rec.version != version or rec.config_hash != h:
        return None
    return rec


def cache_store(root: Path | None, rec: RunRecord):
    if root is None:
        return
    atomic_write(_path(root, rec.config_hash, "runs"), canonical_json(rec.to_json()))


# series entries: per-Z counts reused when a Z grid is extended


def series_load(root: Path | None, key: dict, version: str) -> dict:
    if root is None:
        return {}
    d = _read(_path(root, config_hash(key), "series"))
    if not d or d.get("version") != version:
        return {}
    return {int(z): v for z, v in d.get("counts", {}).items()}


def series_store(root: Path | None, key: dict, version: str, counts: dict):
    if root is None:
        return
    old = series_load(root, key, version)
    old.update(counts)
    doc = {"version": version, "key": key, "counts": {str(z): old[z] for z in sorted(old)}}
    atomic_write(_path(root, config_hash(key), "series"), canonical_json(doc))
