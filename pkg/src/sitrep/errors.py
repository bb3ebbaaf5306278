"""Exception types shared across the pipeline."""

from __future__ import annotations


class SitrepError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SitrepError):
    """Invalid or unreadable pipeline configuration."""


class MalformedRecord(SitrepError):
    def __init__(self, line_no: int, reason: str = ""):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"malformed record at line {line_no}" + (f": {reason}" if reason else ""))


class DuplicateId(SitrepError):
    def __init__(self, article_id: str):
        self.article_id = article_id
        super().__init__(f"duplicate article id: {article_id}")


class UnparseableDate(SitrepError):
    def __init__(self, article_id: str, value: str = ""):
        self.article_id = article_id
        self.value = value
        super().__init__(f"unparseable date {value!r} for article {article_id}")


class EmptyCorpus(SitrepError):
    """No articles to work with."""


class EmptyDocumentSet(SitrepError):
    """Vectorization requires at least one document."""


class EmptyContexts(SitrepError):
    """Summary prompt requires at least one context."""


class EmptyGeneration(SitrepError):
    """Provider returned no usable output."""


class DanglingReference(SitrepError):
    def __init__(self, kind: str, ref_id: str):
        self.kind = kind
        self.ref_id = ref_id
        super().__init__(f"dangling {kind} reference: {ref_id}")


class ProviderError(SitrepError):
    """A model-backed capability failed.

    `reason` is one of: timeout, http_status, parse_failure, empty.
    """

    def __init__(self, capability: str, reason: str, detail: str = ""):
        self.capability = capability
        self.reason = reason
        self.detail = detail
        msg = f"provider failure in {capability} ({reason})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IoError(SitrepError):
    """Failed to read or write an artifact file."""
