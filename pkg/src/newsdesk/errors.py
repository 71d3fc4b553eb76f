"""Error taxonomy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP layer
and CLI can map failures without string matching on messages.
"""

from __future__ import annotations


class NewsdeskError(Exception):
    """Base class; ``code`` is the stable identifier used on the wire."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- ingest ---------------------------------------------------------------

class UnknownSource(NewsdeskError):
    code = "UnknownSource"


class UnreachableSource(NewsdeskError):
    code = "UnreachableSource"


class MalformedFeed(NewsdeskError):
    code = "MalformedFeed"

    def __init__(self, message: str = "", byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


class UndecodablePayload(NewsdeskError):
    code = "UndecodablePayload"


class EmptyAfterExtraction(NewsdeskError):
    code = "EmptyAfterExtraction"


# --- features -------------------------------------------------------------

class EmptyCorpus(NewsdeskError):
    code = "EmptyCorpus"


class EmptyLexicons(NewsdeskError):
    code = "EmptyLexicons"


class SchemaMismatch(NewsdeskError):
    code = "SchemaMismatch"


class LengthMismatch(NewsdeskError):
    code = "LengthMismatch"


# --- classifier -----------------------------------------------------------

class NonFiniteInput(NewsdeskError):
    code = "NonFiniteInput"


class DegenerateLabels(NewsdeskError):
    code = "DegenerateLabels"


class NonFiniteLoss(NewsdeskError):
    code = "NonFiniteLoss"


class InsufficientLabels(NewsdeskError):
    code = "InsufficientLabels"


# --- translator -----------------------------------------------------------

class BackendUnavailable(NewsdeskError):
    code = "BackendUnavailable"


class BackendRefusal(NewsdeskError):
    code = "BackendRefusal"

    def __init__(self, message: str = "", response_body: str = ""):
        super().__init__(message)
        self.response_body = response_body


class EmptyInput(NewsdeskError):
    code = "EmptyInput"


class UnknownBackend(NewsdeskError):
    code = "UnknownBackend"


# --- service --------------------------------------------------------------

class NoEligibleSources(NewsdeskError):
    code = "NoEligibleSources"


class NoModel(NewsdeskError):
    code = "NoModel"


class UnknownArticle(NewsdeskError):
    code = "UnknownArticle"


class UnknownJob(NewsdeskError):
    code = "UnknownJob"


class MalformedFilter(NewsdeskError):
    code = "MalformedFilter"


class StoreLocked(NewsdeskError):
    code = "StoreLocked"
