from __future__ import annotations

from typing import Iterable

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BACKEND = 2
EXIT_DATA = 3


class CorpusForgeError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = EXIT_DATA


class ConfigError(CorpusForgeError):
    exit_code = EXIT_VALIDATION


class BackendError(CorpusForgeError):
    exit_code = EXIT_BACKEND


class TransportError(BackendError):
    def __init__(self, message: str, start: int | None = None, stop: int | None = None):
        if start is not None:
            message = f"{message} (items {start}..{stop - 1})"
        super().__init__(message)
        self.start = start
        self.stop = stop


class ProtocolError(BackendError):
    pass


class ResponseParseError(ProtocolError):
    """Model output could not be parsed; ``raw`` keeps the response for audit."""

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class ResponseCountError(ResponseParseError):
    pass


class ResponseValueError(ResponseParseError):
    pass


class DataError(CorpusForgeError):
    exit_code = EXIT_DATA


class SchemaError(DataError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyDatasetError(DataError):
    pass


class MetricInputError(DataError):
    pass


class AlignmentError(DataError):
    def __init__(self, message: str, ids: Iterable[str] = ()):
        ids = sorted(ids)
        if ids:
            preview = ", ".join(ids[:20])
            more = f" (+{len(ids) - 20} more)" if len(ids) > 20 else ""
            message = f"{message}: {preview}{more}"
        super().__init__(message)
        self.ids = ids


class StageError(CorpusForgeError):
    """A pipeline stage failed; earlier checkpoints are left untouched."""

    def __init__(self, stage: str, cause: BaseException, partial: Iterable = ()):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.partial = list(partial)
        self.exit_code = getattr(cause, "exit_code", EXIT_DATA)
