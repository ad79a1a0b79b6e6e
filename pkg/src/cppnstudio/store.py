"""Append-only publish store with lineage queries.

Records live in a newline-delimited log of canonical JSON, one PublishRecord
per line; records are never rewritten or deleted. A sidecar index holds the
record count, a checksum of the log, and the innovation registry, which is
persisted with the store so historical markings stay globally consistent
across users and restarts. A checksum mismatch on load means the store was
edited or truncated and the owner should restore from backup; the store
refuses to open rather than guess.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .errors import EmptyTitle, StoreCorrupt, UnknownImage
from .evolution import InnovationRegistry, MutationConfig
from .genome import Genome, canonical_json, genome_from_document, genome_to_document

LOG_NAME = "records.ndjson"
INDEX_NAME = "index.json"
LABELS_DIR = "labels"
STORE_VERSION = 1


@dataclass(frozen=True)
class PublishRecord:
    genome_id: str
    parent_id: Optional[str]
    title: str
    author: str
    created_at: str
    config: dict
    genome: Genome

    def to_document(self) -> dict:
        return {
            "genome_id": self.genome_id,
            "parent_id": self.parent_id,
            "title": self.title,
            "author": self.author,
            "created_at": self.created_at,
            "config": self.config,
            "genome": genome_to_document(self.genome, parent_id=self.parent_id,
                                         title=self.title, author=self.author),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "PublishRecord":
        return cls(genome_id=str(doc["genome_id"]),
                   parent_id=(str(doc["parent_id"])
                              if doc.get("parent_id") is not None else None),
                   title=doc["title"], author=doc["author"],
                   created_at=doc["created_at"], config=doc["config"],
                   genome=genome_from_document(doc["genome"]))


@dataclass(frozen=True)
class LineageChain:
    """Publish records from the root ancestor down to the target, plus where
    each of the target's connections exists along the way."""

    records: tuple[PublishRecord, ...]
    tracked_connections: dict[int, list]

    def to_document(self) -> dict:
        return {
            "records": [r.to_document() for r in self.records],
            "tracked_connections": {
                str(innovation): presence
                for innovation, presence in sorted(self.tracked_connections.items())
            },
        }


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class Store:
    """Filesystem-backed publish store; appends are serialized by a lock."""

    def __init__(self, path, clock: Callable[[], str] = _utcnow):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        (self.path / LABELS_DIR).mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._clock = clock
        self.records: list[PublishRecord] = []
        self.by_id: dict[str, PublishRecord] = {}
        self.registry = InnovationRegistry()
        self._load()

    # -- persistence ----------------------------------------------------------

    @property
    def _log_path(self) -> Path:
        return self.path / LOG_NAME

    @property
    def _index_path(self) -> Path:
        return self.path / INDEX_NAME

    def _load(self) -> None:
        log_exists = self._log_path.exists()
        index_exists = self._index_path.exists()
        if not log_exists and not index_exists:
            self._write_index()  # fresh store
            self._log_path.touch()
            return
        if not (log_exists and index_exists):
            raise StoreCorrupt("store has only one of the log and index files")
        raw = self._log_path.read_bytes()
        index = json.loads(self._index_path.read_text(encoding="utf-8"))
        if hashlib.sha256(raw).hexdigest() != index.get("log_sha256"):
            raise StoreCorrupt("record log checksum does not match the index")
        self.registry = InnovationRegistry.from_state(index["registry"])
        for line in raw.decode("utf-8").splitlines():
            if not line.strip():
                continue
            record = PublishRecord.from_document(json.loads(line))
            self.records.append(record)
            self.by_id[record.genome_id] = record

    def _write_index(self) -> None:
        raw = self._log_path.read_bytes() if self._log_path.exists() else b""
        index = {
            "version": STORE_VERSION,
            "record_count": len(self.records),
            "log_sha256": hashlib.sha256(raw).hexdigest(),
            "registry": self.registry.to_state(),
        }
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_text(canonical_json(index) + "\n", encoding="utf-8")
        os.replace(tmp, self._index_path)

    def flush(self) -> None:
        """Re-persist the index (registry state included)."""
        with self._lock:
            self._write_index()

    # -- publishing and queries -----------------------------------------------

    def add_record(self, genome: Genome, parent_id: Optional[str], title: str,
                   author: str, config: MutationConfig) -> PublishRecord:
        if not title or not title.strip():
            raise EmptyTitle("a published image needs a non-empty title")
        if parent_id is not None and parent_id not in self.by_id:
            raise UnknownImage(f"parent image {parent_id!r} is not in the store")
        with self._lock:
            genome_id = str(len(self.records) + 1)
            record = PublishRecord(
                genome_id=genome_id, parent_id=parent_id, title=title.strip(),
                author=author, created_at=self._clock(),
                config=config.to_dict(),
                genome=genome.with_id(genome_id))
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(canonical_json(record.to_document()))
                fh.write("\n")
            self.records.append(record)
            self.by_id[genome_id] = record
            self._write_index()
            return record

    def get(self, image_id: str) -> PublishRecord:
        record = self.by_id.get(str(image_id))
        if record is None:
            raise UnknownImage(f"no image with id {image_id!r}")
        return record

    def lineage(self, image_id: str) -> LineageChain:
        """Walk parent links to the root and track where each of the target's
        connection innovations exists (and whether enabled) per ancestor."""
        chain = [self.get(image_id)]
        while chain[0].parent_id is not None:
            chain.insert(0, self.get(chain[0].parent_id))
        target = chain[-1].genome
        tracked: dict[int, list] = {}
        for conn in target.connections:
            presence = []
            for record in chain:
                present = record.genome.connection_by_innovation.get(conn.innovation)
                presence.append({"genome_id": record.genome_id,
                                 "present": present is not None,
                                 "enabled": present.enabled if present else None})
            tracked[conn.innovation] = presence
        return LineageChain(records=tuple(chain), tracked_connections=tracked)

    def genome_documents(self) -> list[dict]:
        """Corpus view of the store: one genome document per record."""
        return [genome_to_document(r.genome, parent_id=r.parent_id,
                                   title=r.title, author=r.author)
                for r in self.records]

    # -- connection labels ----------------------------------------------------

    def labels_path(self, image_id: str) -> Path:
        return self.path / LABELS_DIR / f"{image_id}.json"
