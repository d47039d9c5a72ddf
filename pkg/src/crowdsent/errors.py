"""Shared exception types, mapped to CLI exit codes in crowdsent.cli."""


class CrowdsentError(Exception):
    """Base class for all package errors."""


class UsageError(CrowdsentError):
    """Caller violated a precondition (bad argument, bad stage order)."""


class ParseError(CrowdsentError):
    """A data file could not be parsed. Carries path and 1-based line number."""

    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class MissingInputError(CrowdsentError):
    """A required stage artifact is absent."""

    def __init__(self, name: str, path=None):
        self.name = name
        self.path = str(path) if path is not None else None
        where = f" ({self.path})" if self.path else ""
        super().__init__(f"missing required input: {name}{where}")


class PendingDecisionsError(CrowdsentError):
    """Human decisions are outstanding; the pipeline cannot auto-progress."""

    def __init__(self, review_path, pending_keys):
        self.review_path = str(review_path)
        self.pending_keys = list(pending_keys)
        super().__init__(
            f"{len(self.pending_keys)} pending decision(s); review file: {self.review_path}"
        )


class UndefinedMetricError(CrowdsentError):
    """Metric denominator is zero; the value is undefined."""


class IncompleteTaskError(CrowdsentError):
    """A sampling task still has unlabeled items."""


class TransportError(CrowdsentError):
    """Backend request failed after retries. Carries the credential used."""

    def __init__(self, message: str, credential_id: str | None = None):
        self.credential_id = credential_id
        suffix = f" [credential {credential_id}]" if credential_id else ""
        super().__init__(message + suffix)


class AccessDeniedError(CrowdsentError):
    """The source refused access (protected account)."""

    def __init__(self, user_id: str):
        self.user_id = user_id
        super().__init__(f"access denied for protected user {user_id}")


class RateLimitedError(CrowdsentError):
    """Non-blocking gateway mode: no rate slot available right now."""

    def __init__(self, retry_after: float):
        self.retry_after = retry_after
        super().__init__(f"rate budget exhausted; retry after {retry_after:.3f}s")
