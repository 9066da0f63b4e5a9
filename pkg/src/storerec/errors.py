"""Exception hierarchy shared by every module.

Each class carries a stable machine-readable ``code`` and the HTTP status
the service layer maps it to, so one domain error always surfaces as
exactly one wire-level error code.
"""


class StoreRecError(Exception):
    code = "internal_error"
    http_status = 500


class InvalidArgument(StoreRecError):
    """Caller passed a value a precondition rejects (bad p, mismatched dims, ...)."""

    code = "invalid_argument"
    http_status = 400


class MalformedData(StoreRecError):
    """A file or record could not be parsed."""

    code = "malformed_data"
    http_status = 400


class UnknownSession(StoreRecError):
    code = "unknown_session"
    http_status = 404


class UnknownItem(StoreRecError):
    code = "unknown_item"
    http_status = 404


class UnknownShelf(StoreRecError):
    code = "unknown_shelf"
    http_status = 404


class UnknownPanel(StoreRecError):
    code = "unknown_panel"
    http_status = 404


class PhaseConflict(StoreRecError):
    """Event not legal in the session's current phase (or ordering violated)."""

    code = "phase_conflict"
    http_status = 409


class StaleTimestamp(StoreRecError):
    """Position sample older than the session's last accepted sample."""

    code = "stale_timestamp"
    http_status = 409


class AlreadySettled(StoreRecError):
    """Recommendation panel settlement attempted twice."""

    code = "already_settled"
    http_status = 409


class CatalogExhausted(StoreRecError):
    """Every catalog item is already in the cart; no recommendation possible."""

    code = "catalog_exhausted"
    http_status = 409


class StorageFailure(StoreRecError):
    code = "storage_failure"
    http_status = 500
