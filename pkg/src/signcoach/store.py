"""File-backed persistence: one directory per collection, one JSON document
per entity, atomic writes."""

from __future__ import annotations

import json
import secrets
import time
from pathlib import Path

from . import files

# collection -> (directory, filename suffix); results live beside attempts
COLLECTIONS = {
    "templates": ("templates", ".sign.json"),
    "hands": ("hands", ".hands.json"),
    "lessons": ("lessons", ".lesson.json"),
    "attempts": ("attempts", ".sign.json"),
    "results": ("attempts", ".json"),
}

_VALIDATORS = {
    "templates": files.parse_template,
    "hands": files.parse_library,
    "lessons": files.parse_lesson,
    "attempts": lambda doc: files.parse_recording(doc),
    "results": lambda doc: doc,
}

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


def new_ulid() -> str:
    """Sortable 26-char id: 48-bit millisecond timestamp + 80 random bits."""
    value = (int(time.time() * 1000) << 80) | secrets.randbits(80)
    chars = []
    for _ in range(26):
        chars.append(_CROCKFORD[value & 31])
        value >>= 5
    return "".join(reversed(chars))


class NotFound(KeyError):
    pass


class Conflict(ValueError):
    pass


class Store:
    """CRUD over the on-disk layout; payloads are validated JSON documents."""

    def __init__(self, root):
        self.root = Path(root)
        for dirname, _suffix in COLLECTIONS.values():
            (self.root / dirname).mkdir(parents=True, exist_ok=True)
        (self.root / "sessions").mkdir(exist_ok=True)

    def _path(self, collection: str, entity_id: str) -> Path:
        if collection not in COLLECTIONS:
            raise NotFound(f"unknown collection {collection!r}")
        dirname, suffix = COLLECTIONS[collection]
        return self.root / dirname / f"{entity_id}{suffix}"

    def validate(self, collection: str, payload: dict):
        return _VALIDATORS[collection](payload)

    def put(self, collection: str, entity_id: str, payload: dict,
            create_only: bool = False) -> dict:
        self.validate(collection, payload)
        path = self._path(collection, entity_id)
        if create_only and path.exists():
            raise Conflict(f"{collection}/{entity_id} already exists")
        files.dump_json(payload, path)
        return payload

    def get(self, collection: str, entity_id: str) -> dict:
        path = self._path(collection, entity_id)
        if not path.exists():
            raise NotFound(f"{collection}/{entity_id}")
        return json.loads(path.read_text(encoding="utf-8"))

    def delete(self, collection: str, entity_id: str) -> dict:
        path = self._path(collection, entity_id)
        if not path.exists():
            raise NotFound(f"{collection}/{entity_id}")
        path.unlink()
        return {"deleted": entity_id}

    def list_ids(self, collection: str) -> list[str]:
        if collection not in COLLECTIONS:
            raise NotFound(f"unknown collection {collection!r}")
        dirname, suffix = COLLECTIONS[collection]
        ids = []
        for p in (self.root / dirname).iterdir():
            if not p.name.endswith(suffix):
                continue
            if collection == "results" and p.name.endswith(".sign.json"):
                continue
            ids.append(p.name[: -len(suffix)])
        return sorted(ids)

    def session_log_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.session.jsonl"
