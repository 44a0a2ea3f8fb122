"""Exception hierarchy for the fidel_eval toolkit.

Every error carries an ``exit_code`` so the CLI can map failures onto its
stable contract: 1 for data/validation failures, 2 for usage errors.
"""
from typing import Any, Dict, Iterable, Optional


class FidelEvalError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ManifestError(FidelEvalError):
    """Problem with a manifest file, located by path and line."""

    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        super().__init__(message, {"path": path, "line": line_no})
        self.path = path
        self.line_no = line_no

    def __str__(self) -> str:
        where = ""
        if self.path:
            where = f"{self.path}"
            if self.line_no is not None:
                where += f":{self.line_no}"
            where += ": "
        elif self.line_no is not None:
            where = f"line {self.line_no}: "
        return f"{where}{super().__str__()}"


class ManifestParseError(ManifestError):
    """Malformed record in a manifest."""


class ManifestEncodingError(ManifestError):
    """Manifest content is not valid UTF-8 or not valid Unicode."""


class DuplicateIdError(ManifestError):
    """The same utterance id appears twice in one manifest."""

    def __init__(self, pair_id: str, path: Optional[str] = None, line_no: Optional[int] = None):
        super().__init__(f"duplicate id '{pair_id}'", path, line_no)
        self.pair_id = pair_id


class EmptyReferenceError(FidelEvalError):
    """A reference transcription has no words, so it cannot be scored against."""

    def __init__(self, pair_id: Optional[str] = None, path: Optional[str] = None,
                 line_no: Optional[int] = None):
        if pair_id is None:
            message = "empty reference"
        else:
            message = f"empty reference for pair '{pair_id}'"
        if path:
            message = f"{path}:{line_no}: {message}" if line_no is not None else f"{path}: {message}"
        super().__init__(message, {"pair_id": pair_id, "path": path, "line": line_no})
        self.pair_id = pair_id


class EmptyCorpusError(FidelEvalError):
    """A corpus-level metric was asked to score zero pairs."""

    def __init__(self, message: str = "corpus contains no pairs"):
        super().__init__(message)


class IdSetMismatchError(FidelEvalError):
    """Model manifests do not cover the same utterance ids."""

    def __init__(self, model: str, missing: Iterable[str], unexpected: Iterable[str]):
        self.model = model
        self.missing = sorted(missing)
        self.unexpected = sorted(unexpected)
        parts = []
        if self.missing:
            parts.append(f"missing ids {_preview(self.missing)}")
        if self.unexpected:
            parts.append(f"unexpected ids {_preview(self.unexpected)}")
        super().__init__(
            f"id set of model '{model}' differs from the reference: " + "; ".join(parts),
            {"model": model, "missing": self.missing, "unexpected": self.unexpected},
        )


class ReferenceMismatchError(FidelEvalError):
    """A model manifest carries a reference that differs from the shared one."""

    def __init__(self, pair_id: str, model: str):
        super().__init__(
            f"reference for id '{pair_id}' in model '{model}' differs from the shared reference",
            {"pair_id": pair_id, "model": model},
        )
        self.pair_id = pair_id
        self.model = model


class TableFormatError(FidelEvalError):
    """Malformed normalization table override."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        location = path or "<table>"
        if line_no is not None:
            location = f"{location}:{line_no}"
        super().__init__(f"{location}: {message}", {"path": path, "line": line_no})
        self.path = path
        self.line_no = line_no


class ConfigurationError(FidelEvalError):
    """Invalid setting in the environment or a configuration file."""

    exit_code = 2


class InvariantViolationError(FidelEvalError):
    """A provable property of the metrics did not hold; indicates a bug."""


def _preview(ids, limit: int = 5) -> str:
    shown = ", ".join(repr(i) for i in ids[:limit])
    if len(ids) > limit:
        shown += f", ... ({len(ids) - limit} more)"
    return f"[{shown}]"
