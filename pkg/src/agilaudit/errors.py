"""Error types shared across the audit engine.

Exit-code mapping for the CLI: ValidationError -> 1, ConflictError -> 2,
StorageError -> 3. NotFoundError maps to HTTP 404 and CLI exit 1.
"""

from __future__ import annotations


class AuditError(Exception):
    """Base class for engine errors."""

    code = "error"


class ValidationError(AuditError):
    """Input violates a structural or referential constraint."""

    code = "validation"


class ConflictError(AuditError):
    """Optimistic-concurrency conflict: caller holds a stale revision."""

    code = "conflict"


class NotFoundError(AuditError):
    """Referenced audit or dataset does not exist."""

    code = "not-found"


class StorageError(AuditError):
    """I/O failure in the document store."""

    code = "io"
