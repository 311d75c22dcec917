from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator

from apps.core.exceptions import DataError, SchemaError

logger = logging.getLogger(__name__)


def dumps_line(record: dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False)


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write through a temp file in the same directory and rename over *path*."""
    path = Path(path)
    if not path.parent.is_dir():
        raise DataError(f"directory does not exist: {path.parent}")
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def write_jsonl(path: str | os.PathLike, records: Iterable[dict[str, Any]]) -> int:
    lines = [dumps_line(record) for record in records]
    atomic_write_text(path, "".join(f"{line}\n" for line in lines))
    logger.debug("Wrote %d records → %s", len(lines), path)
    return len(lines)


def iter_jsonl(path: str | os.PathLike) -> Iterator[tuple[int, Any]]:
    """Yield ``(line_number, payload)``; line numbers start at 1."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise DataError(f"file not found: {path}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    # only \n ends a record; U+2028 may appear raw inside JSON strings
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    for number, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        if not line.strip():
            raise SchemaError("empty line", line=number)
        try:
            yield number, json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON ({exc.msg})", line=number) from exc


def write_json(path: str | os.PathLike, document: Any) -> None:
    atomic_write_text(path, json.dumps(document, ensure_ascii=False, indent=2) + "\n")


def read_json(path: str | os.PathLike) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DataError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        message = f"{path}: malformed JSON ({exc.msg})"
        raise SchemaError(message, line=exc.lineno) from exc
