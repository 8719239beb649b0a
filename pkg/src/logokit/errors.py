"""Domain error types shared by the store, the workflow engine, sync, API and CLI.

Every error carries a machine-readable ``code`` (the class name) so the HTTP
layer and the CLI can surface it without string matching.
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for recoverable domain errors."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def code(self) -> str:
        return type(self).__name__


class NotFound(DomainError):
    pass


class ValidationFailed(DomainError):
    def __init__(self, message: str, violations=(), **details: Any):
        super().__init__(message, **details)
        self.violations = list(violations)


class ReferentialIntegrity(DomainError):
    """A referenced entity id does not exist. ``missing`` lists (kind, id)."""

    def __init__(self, message: str, missing=(), **details: Any):
        super().__init__(message, **details)
        self.missing = list(missing)


class UniquenessViolation(DomainError):
    pass


class StillReferenced(DomainError):
    """Delete or overwrite rejected; ``referrers`` lists (kind, id) holding references."""

    def __init__(self, message: str, referrers=(), **details: Any):
        super().__init__(message, **details)
        self.referrers = list(referrers)


class SourceMissing(DomainError):
    pass


class NameCollision(DomainError):
    pass


class WrongExtension(DomainError):
    pass


class AlreadyReported(DomainError):
    pass


class UnknownExercise(DomainError):
    pass


class BadAttemptSequence(DomainError):
    pass


class UnknownAssignment(DomainError):
    pass


class DigestMismatch(DomainError):
    pass


class AssetMissing(DomainError):
    pass


class MalformedBundle(DomainError):
    pass


class StoreOpenFailure(DomainError):
    pass


class BindFailure(DomainError):
    pass
