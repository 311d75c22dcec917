from __future__ import annotations

import os
from pathlib import Path
from typing import Sequence

from apps.core.exceptions import DataError, MetricInputError, SchemaError
from apps.corpus.records import count_words


def tokenizer_fertility(texts: Sequence[str], token_counts: Sequence[int]) -> float:
    """Tokens per whitespace word over the whole text list."""
    if len(texts) != len(token_counts):
        raise MetricInputError(
            f"{len(token_counts)} token counts for {len(texts)} texts"
        )
    words = sum(count_words(text) for text in texts)
    if not words:
        raise MetricInputError("fertility needs at least one word")
    return sum(token_counts) / words


def load_token_counts(path: str | os.PathLike) -> list[int]:
    """One non-negative integer per line."""
    counts = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for line_number, line in enumerate(lines, start=1):
        value = line.strip()
        if not (value.isascii() and value.isdigit()):
            raise SchemaError(
                f"token count must be an integer, got {value!r}", line_number
            )
        counts.append(int(value))
    if not counts:
        raise DataError(f"{path}: no token counts")
    return counts
