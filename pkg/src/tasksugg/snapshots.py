"""Immutable snapshots of source responses, persisted one JSON file per
(topic, source) pair.

With a populated store the whole downstream pipeline is a pure function of
(store, configuration), which is what makes experiments replayable. Writes
are atomic (write-temp-then-rename), so concurrent readers never observe a
torn file and the last writer per key wins.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .model import RetrievedDocument, SourceDescriptor, source_for_id

SNAPSHOT_FORMAT_VERSION = 1


class SnapshotNotFound(LookupError):
    pass


class SnapshotFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SnapshotRecord:
    """One source's frozen top-K response for one topic."""

    topic_id: str
    source: SourceDescriptor
    fetched_at: str  # RFC 3339 timestamp
    documents: tuple[RetrievedDocument, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "documents", tuple(self.documents))
        for position, doc in enumerate(self.documents, start=1):
            if doc.rank != position:
                raise ValueError("documents must be rank-ordered 1..n")
            if doc.source != self.source:
                raise ValueError("document source does not match record source")


def record_to_dict(record: SnapshotRecord) -> dict:
    return {
        "version": SNAPSHOT_FORMAT_VERSION,
        "topic_id": record.topic_id,
        "source_id": record.source.source_id,
        "fetched_at": record.fetched_at,
        "documents": [
            {
                "rank": doc.rank,
                "doc_id": doc.doc_id,
                "title": doc.title,
                "body": doc.body,
                "url": doc.url,
            }
            for doc in record.documents
        ],
    }


def record_from_dict(data: dict) -> SnapshotRecord:
    try:
        version = data["version"]
        if version != SNAPSHOT_FORMAT_VERSION:
            raise SnapshotFormatError(f"unsupported snapshot version {version!r}")
        source = source_for_id(data["source_id"])
        documents = tuple(
            RetrievedDocument(
                doc_id=doc["doc_id"],
                source=source,
                rank=doc["rank"],
                title=doc.get("title", ""),
                body=doc.get("body", ""),
                url=doc.get("url", ""),
            )
            for doc in data["documents"]
        )
        return SnapshotRecord(
            topic_id=data["topic_id"],
            source=source,
            fetched_at=data["fetched_at"],
            documents=documents,
        )
    except SnapshotFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotFormatError(f"malformed snapshot: {exc}") from exc


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


class SnapshotStore:
    """Directory of snapshot files, keyed by (topic_id, source_id)."""

    def __init__(self, root) -> None:
        self.root = Path(root)

    def path_for(self, topic_id: str, source_id: str) -> Path:
        return self.root / f"{_safe(topic_id)}__{_safe(source_id)}.json"

    def save(self, record: SnapshotRecord) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        target = self.path_for(record.topic_id, record.source.source_id)
        payload = json.dumps(
            record_to_dict(record), ensure_ascii=False, sort_keys=True, indent=2
        )
        fd, tmp_name = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return target

    def exists(self, topic_id: str, source_id: str) -> bool:
        return self.path_for(topic_id, source_id).is_file()

    def load(self, topic_id: str, source_id: str) -> SnapshotRecord:
        path = self.path_for(topic_id, source_id)
        try:
            raw = path.read_text("utf-8")
        except FileNotFoundError:
            raise SnapshotNotFound(f"no snapshot for ({topic_id}, {source_id})")
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SnapshotFormatError(f"corrupt snapshot {path.name}: {exc}") from exc
        record = record_from_dict(data)
        return record

    def load_present(
        self, topic_id: str, source_ids
    ) -> tuple[list[SnapshotRecord], list[str]]:
        """Load available snapshots for a topic; also report the missing ids."""
        records: list[SnapshotRecord] = []
        missing: list[str] = []
        for source_id in source_ids:
            if self.exists(topic_id, source_id):
                records.append(self.load(topic_id, source_id))
            else:
                missing.append(source_id)
        return records, missing

    def topics(self) -> list[str]:
        """Distinct topic ids present in the store, sorted."""
        seen = set()
        if self.root.is_dir():
            for path in self.root.glob("*.json"):
                try:
                    data = json.loads(path.read_text("utf-8"))
                    seen.add(data["topic_id"])
                except (OSError, json.JSONDecodeError, KeyError, TypeError):
                    continue
        return sorted(seen)

    def sources_for(self, topic_id: str) -> list[str]:
        present = []
        if self.root.is_dir():
            for path in self.root.glob(f"{_safe(topic_id)}__*.json"):
                try:
                    data = json.loads(path.read_text("utf-8"))
                except (OSError, json.JSONDecodeError):
                    continue
                if data.get("topic_id") == topic_id:
                    present.append(data["source_id"])
        return sorted(present)
