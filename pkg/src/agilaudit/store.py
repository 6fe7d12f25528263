"""File-backed audit-document store with optimistic revisioning.

One JSON file per audit under the data directory. Writes are serialized per
audit and land via write-new-then-rename, so a reader never observes a torn
document. Every mutation revalidates the document against the taxonomy and
bumps the revision by exactly one; a mismatched expected revision is a
conflict and leaves the stored document untouched.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Callable, Optional

from dataclasses import replace

from .document import AuditDocument, Ecosystem, document_from_dict, document_to_dict
from .errors import ConflictError, NotFoundError, StorageError, ValidationError

DEFAULT_DATA_DIR = "./data"
_SAFE_ID = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.")


def _check_audit_id(audit_id: str) -> None:
    if not audit_id or not set(audit_id) <= _SAFE_ID or audit_id.startswith("."):
        raise ValidationError(f"audit id must be a safe filename stem, got {audit_id!r}")


class DocumentStore:
    """Single-writer-per-document JSON store."""

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir or os.environ.get("AGIL_DATA_DIR", DEFAULT_DATA_DIR))
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, audit_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(audit_id, threading.Lock())

    def _path(self, audit_id: str) -> Path:
        _check_audit_id(audit_id)
        return self.data_dir / f"{audit_id}.json"

    def list_audits(self) -> list[dict]:
        if not self.data_dir.exists():
            return []
        summaries = []
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                doc = self._read_path(path)
            except (ValidationError, StorageError):
                continue
            summaries.append(
                {
                    "audit_id": doc.audit_id,
                    "ecosystem": doc.ecosystem.name,
                    "design_class": doc.ecosystem.design_class,
                    "revision": doc.revision,
                    "sheets": [s.rater_id for s in doc.sheets],
                }
            )
        return summaries

    def exists(self, audit_id: str) -> bool:
        return self._path(audit_id).exists()

    def _read_path(self, path: Path) -> AuditDocument:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"stored document {path.name} is not valid JSON: {exc}") from exc
        return document_from_dict(data)

    def load(self, audit_id: str) -> AuditDocument:
        path = self._path(audit_id)
        if not path.exists():
            raise NotFoundError(f"no audit named {audit_id!r}")
        return self._read_path(path)

    def _write(self, doc: AuditDocument) -> None:
        doc.validate()
        path = self._path(doc.audit_id)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(f".{path.name}.tmp")
            tmp.write_text(
                json.dumps(document_to_dict(doc), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageError(f"cannot write {path}: {exc}") from exc

    def create(self, audit_id: str, ecosystem: Ecosystem, document: Optional[AuditDocument] = None) -> AuditDocument:
        with self._lock_for(audit_id):
            if self.exists(audit_id):
                raise ConflictError(f"audit {audit_id!r} already exists")
            doc = document or AuditDocument(audit_id=audit_id, ecosystem=ecosystem)
            doc = replace(doc, audit_id=audit_id, revision=1)
            self._write(doc)
            return doc

    def import_document(self, doc: AuditDocument, overwrite: bool = False) -> AuditDocument:
        with self._lock_for(doc.audit_id):
            if self.exists(doc.audit_id) and not overwrite:
                raise ConflictError(f"audit {doc.audit_id!r} already exists")
            self._write(doc)
            return doc

    def update(
        self,
        audit_id: str,
        expected_revision: int,
        mutation: Callable[[AuditDocument], AuditDocument],
    ) -> AuditDocument:
        """Apply a mutation atomically if the caller's revision is current."""
        with self._lock_for(audit_id):
            current = self.load(audit_id)
            if current.revision != expected_revision:
                raise ConflictError(
                    f"stale revision: expected {expected_revision}, stored {current.revision}"
                )
            mutated = mutation(current)
            if mutated.audit_id != audit_id:
                raise ValidationError("mutation must not change the audit id")
            mutated = replace(mutated, revision=current.revision + 1)
            mutated.validate()
            self._write(mutated)
            return mutated

    def update_latest(
        self, audit_id: str, mutation: Callable[[AuditDocument], AuditDocument], retries: int = 8
    ) -> AuditDocument:
        """Read-modify-write against the current revision, retrying on conflict.

        Used by entry-level endpoints whose mutations commute (per-rater sheet
        upserts target disjoint fields).
        """
        for _ in range(retries):
            current = self.load(audit_id)
            try:
                return self.update(audit_id, current.revision, mutation)
            except ConflictError:
                continue
        raise ConflictError(f"could not apply mutation to {audit_id!r} after {retries} retries")
